"""
Synonym lexicon - the eight synonym groups and five word sets

Row k of the word sets takes the k-th member of every group, so set 1 is
the base vocabulary (pull push slide red green yellow slowly fast).
"""

from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Tuple

BOS = "BOS"
EOS = "EOS"
MERGED_SYMBOL = "BOS_EOS"

N_WORD_SETS = 5


class PartOfSpeech(str, Enum):
    """Description slot a synonym group fills"""

    VERB = "verb"
    ADJECTIVE = "adjective"
    ADVERB = "adverb"

    @property
    def short(self) -> str:
        return {"verb": "verb", "adjective": "adj", "adverb": "adv"}[self.value]


SLOT_ORDER: Tuple[PartOfSpeech, ...] = (PartOfSpeech.VERB, PartOfSpeech.ADJECTIVE, PartOfSpeech.ADVERB)


@dataclass(frozen=True)
class SynonymGroup:
    """Five interchangeable words naming one action component"""

    label: str
    pos: PartOfSpeech
    members: Tuple[str, ...]

    def member(self, word_set: int) -> str:
        """Member of word set ``word_set`` (1-based)"""
        if not 1 <= word_set <= len(self.members):
            raise ValueError(f"word set must be in 1..{len(self.members)}, got {word_set}")
        return self.members[word_set - 1]


DEFAULT_GROUPS: Tuple[SynonymGroup, ...] = (
    SynonymGroup("pull", PartOfSpeech.VERB, ("pull", "drag", "tug", "yank", "lug")),
    SynonymGroup("push", PartOfSpeech.VERB, ("push", "shove", "thrust", "jostle", "hustle")),
    SynonymGroup("slide", PartOfSpeech.VERB, ("slide", "glide", "slip", "shift", "skid")),
    SynonymGroup("red", PartOfSpeech.ADJECTIVE, ("red", "reddish", "cardinal", "coral", "flaming")),
    SynonymGroup("green", PartOfSpeech.ADJECTIVE, ("green", "greenish", "olive", "emerald", "chartreuse")),
    SynonymGroup("yellow", PartOfSpeech.ADJECTIVE, ("yellow", "yellowish", "cream", "amber", "tawny")),
    SynonymGroup("slowly", PartOfSpeech.ADVERB, ("slowly", "leisurely", "gradually", "tardily", "steadily")),
    SynonymGroup("fast", PartOfSpeech.ADVERB, ("fast", "speedily", "swiftly", "rapidly", "quickly")),
)


class SynonymLexicon:
    """
    Synonym groups plus the BOS/EOS symbols

    Vocabulary order is groups in column order, members in set order, then
    the symbols; this is also the row/column order of the cosine matrices.
    """

    def __init__(self, groups: Tuple[SynonymGroup, ...] = DEFAULT_GROUPS, merge_symbols: bool = False):
        self.groups = tuple(groups)
        self.merge_symbols = merge_symbols
        self._validate()
        self._group_of: Dict[str, SynonymGroup] = {w: g for g in self.groups for w in g.members}

    def _validate(self) -> None:
        counts = {pos: sum(1 for g in self.groups if g.pos == pos) for pos in PartOfSpeech}
        expected = {PartOfSpeech.VERB: 3, PartOfSpeech.ADJECTIVE: 3, PartOfSpeech.ADVERB: 2}
        if counts != expected:
            raise ValueError(f"lexicon needs 3 verb, 3 adjective and 2 adverb groups, got {counts}")
        words: List[str] = []
        for group in self.groups:
            if len(group.members) != N_WORD_SETS:
                raise ValueError(f"group '{group.label}' must have {N_WORD_SETS} members")
            words.extend(group.members)
        if len(set(words)) != len(words):
            raise ValueError("synonym group members must be unique across the lexicon")

    @property
    def bos(self) -> str:
        return MERGED_SYMBOL if self.merge_symbols else BOS

    @property
    def eos(self) -> str:
        return MERGED_SYMBOL if self.merge_symbols else EOS

    @property
    def symbols(self) -> Tuple[str, ...]:
        return (MERGED_SYMBOL,) if self.merge_symbols else (BOS, EOS)

    @property
    def words(self) -> List[str]:
        """All group members in vocabulary order"""
        return [w for g in self.groups for w in g.members]

    def vocabulary(self) -> List[str]:
        """Words followed by the symbol tokens (42 entries, or 41 merged)"""
        return self.words + list(self.symbols)

    def group(self, label: str) -> SynonymGroup:
        for g in self.groups:
            if g.label == label:
                return g
        raise KeyError(f"no synonym group '{label}'")

    def group_of(self, word: str) -> Optional[SynonymGroup]:
        return self._group_of.get(word)

    def groups_for(self, pos: PartOfSpeech) -> List[SynonymGroup]:
        return [g for g in self.groups if g.pos == pos]

    def word_set(self, k: int) -> List[str]:
        """Row k (1-based) of the word-set table: k-th member of every group"""
        return [g.member(k) for g in self.groups]

    def set_index(self, word: str) -> int:
        """1-based word set a member belongs to"""
        group = self.group_of(word)
        if group is None:
            raise KeyError(f"'{word}' is not a lexicon word")
        return group.members.index(word) + 1
