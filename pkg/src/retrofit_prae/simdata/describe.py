"""
Descriptions - BOS + verb + adjective + adverb + EOS for an action

The adjective names the colour of the cube on the acting hand's side, so
PUSH-RIGHT-SLOWLY with red on the right is "push red slowly".
"""

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from retrofit_prae.embeddings.lexicon import SLOT_ORDER, PartOfSpeech, SynonymLexicon
from retrofit_prae.simdata.actions import COLOR_GROUP, MOTION_GROUP, SPEED_GROUP, ActionSpec

WordSets = Tuple[int, int, int]


@dataclass(frozen=True)
class Description:
    """Five-token description; the middle three follow verb, adjective, adverb order"""

    tokens: Tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "tokens", tuple(self.tokens))
        if len(self.tokens) != 5:
            raise ValueError(f"a description has 5 tokens, got {len(self.tokens)}")

    @property
    def words(self) -> Tuple[str, str, str]:
        return self.tokens[1], self.tokens[2], self.tokens[3]

    @property
    def verb(self) -> str:
        return self.tokens[1]

    @property
    def adjective(self) -> str:
        return self.tokens[2]

    @property
    def adverb(self) -> str:
        return self.tokens[3]

    def text(self) -> str:
        return " ".join(self.words)


def spec_groups(spec: ActionSpec) -> Tuple[str, str, str]:
    """Synonym group labels the (verb, adjective, adverb) slots must come from"""
    return MOTION_GROUP[spec.motion], COLOR_GROUP[spec.acting_color], SPEED_GROUP[spec.speed]


def describe_with(spec: ActionSpec, word_sets: Sequence[int], lexicon: Optional[SynonymLexicon] = None) -> Description:
    """
    Description whose verb, adjective and adverb come from the given word sets

    Args:
        spec: Action to describe
        word_sets: Word-set index (1-5) per slot, verb first
        lexicon: Synonym lexicon, default groups when omitted

    Returns:
        Description wrapped in the lexicon's BOS/EOS symbols
    """
    lexicon = lexicon or SynonymLexicon()
    if len(word_sets) != len(SLOT_ORDER):
        raise ValueError(f"need one word set per slot, got {list(word_sets)}")
    words = [lexicon.group(label).member(k) for label, k in zip(spec_groups(spec), word_sets)]
    return Description((lexicon.bos, *words, lexicon.eos))


def describe(spec: ActionSpec, k: int, lexicon: Optional[SynonymLexicon] = None) -> Description:
    """Description using word set ``k`` for every slot"""
    return describe_with(spec, (k, k, k), lexicon)


def unseen_slots(word_sets: Sequence[int], test_set: int) -> Tuple[PartOfSpeech, ...]:
    """Slots whose word comes from the held-out word set"""
    return tuple(pos for pos, k in zip(SLOT_ORDER, word_sets) if k == test_set)


def unseen_key(word_sets: Sequence[int], test_set: int) -> str:
    """Grouping key such as "-", "verb", "adj+adv", "adv+verb" or "verb+adj+adv" """
    slots = unseen_slots(word_sets, test_set)
    if not slots:
        return "-"
    if len(slots) == 2 and slots == (PartOfSpeech.VERB, PartOfSpeech.ADVERB):
        return "adv+verb"
    return "+".join(pos.short for pos in slots)
