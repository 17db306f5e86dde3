"""
SVG rendering of cosine heatmaps and PCA scatter plots from jinja2 templates
"""

from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import numpy as np
from jinja2 import Environment, FileSystemLoader, Template
from loguru import logger

from retrofit_prae.embeddings.lexicon import SynonymLexicon

TEMPLATES_DIR = Path(__file__).parent / "templates"

GROUP_COLORS = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#17becf")
SYMBOL_COLOR = "#7f7f7f"


def diverging_color(value: float) -> str:
    """Blue (-1) through white (0) to red (+1)"""
    v = float(np.clip(value, -1.0, 1.0))
    if v >= 0:
        r, g, b = 255, int(round(255 * (1 - v))), int(round(255 * (1 - v)))
    else:
        r, g, b = int(round(255 * (1 + v))), int(round(255 * (1 + v))), 255
    return f"#{r:02x}{g:02x}{b:02x}"


class SvgRenderer:
    """
    Renders analysis figures

    Responsibilities:
    - Load and cache the SVG templates
    - Lay out heatmap cells and scatter points
    - Write the rendered files
    """

    def __init__(self, templates_dir: Optional[Union[str, Path]] = None):
        self.templates_dir = Path(templates_dir) if templates_dir else TEMPLATES_DIR
        self.env = Environment(
            loader=FileSystemLoader(str(self.templates_dir)),
            autoescape=True,
            trim_blocks=True,
            lstrip_blocks=True,
        )
        self._cache: Dict[str, Template] = {}

    def get_template(self, name: str) -> Template:
        if name not in self._cache:
            self._cache[name] = self.env.get_template(f"{name}.svg.jinja2")
        return self._cache[name]

    def heatmap(self, matrix: np.ndarray, labels: Sequence[str], title: str, cell: int = 14) -> str:
        margin, top = 90, 110
        n = len(labels)
        cells = [
            {
                "x": margin + j * cell,
                "y": top + i * cell,
                "color": diverging_color(matrix[i, j]),
                "row": labels[i],
                "col": labels[j],
                "value": f"{matrix[i, j]:.3f}",
            }
            for i in range(n)
            for j in range(n)
        ]
        return self.get_template("heatmap").render(
            title=title,
            labels=list(labels),
            cells=cells,
            cell=cell,
            margin=margin,
            top=top,
            width=margin + n * cell + 20,
            height=top + n * cell + 20,
            font_size=max(cell - 4, 6),
        )

    def scatter(
        self,
        coords: np.ndarray,
        labels: Sequence[str],
        colors: Sequence[str],
        title: str,
        axes: Sequence[str] = ("PC1", "PC2"),
        size: int = 420,
    ) -> str:
        margin = 40
        lo, hi = coords.min(axis=0), coords.max(axis=0)
        span = np.where(hi - lo > 0, hi - lo, 1.0)
        scaled = (coords - lo) / span
        points = [
            {
                "x": round(margin + 10 + scaled[i, 0] * (size - 20), 2),
                "y": round(margin + size - 10 - scaled[i, 1] * (size - 20), 2),
                "label": labels[i],
                "color": colors[i],
            }
            for i in range(len(labels))
        ]
        return self.get_template("scatter").render(
            title=title, points=points, size=size, margin=margin, x_label=axes[0], y_label=axes[1]
        )


def word_colors(words: Sequence[str], lexicon: SynonymLexicon) -> List[str]:
    """One colour per synonym group, grey for symbols"""
    index = {g.label: i for i, g in enumerate(lexicon.groups)}
    colors = []
    for word in words:
        group = lexicon.group_of(word)
        colors.append(SYMBOL_COLOR if group is None else GROUP_COLORS[index[group.label] % len(GROUP_COLORS)])
    return colors


def write_svg(content: str, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(content, encoding="utf-8")
    logger.debug(f"Wrote {path}")
    return path
