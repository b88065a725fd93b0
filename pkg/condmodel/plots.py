import os
from typing import List, Optional

import pandas as pd
import seaborn as sns
from matplotlib.figure import Figure

from .analysis import CondSequence, Selection
from .config import VIZ_CONFIG
from .values import CondNat, CondReal


class VisualizationCreator:
    """
    Renders Bolzano-Weierstrass traces and argmin selections.

    Attributes:
        output_dir (str): Directory where plots are saved
    """

    def __init__(self, output_dir: Optional[str] = None):
        self.output_dir = str(output_dir or VIZ_CONFIG.output_dir)
        os.makedirs(self.output_dir, exist_ok=True)

    def _save(self, fig: Figure, filename: str) -> str:
        path = os.path.join(self.output_dir, filename)
        fig.savefig(path, bbox_inches="tight")
        return path

    def create_bw_plot(
        self,
        seq: CondSequence,
        indices: List[CondNat],
        target: CondReal,
        horizon: int,
        filename: str = "bw_trace.png",
    ) -> str:
        """Terms per atom up to the last extracted index, the subsequence highlighted."""
        try:
            last = max(max(n.values) for n in indices) if indices else 0
            stop = min(horizon, last + 1)
            terms = pd.DataFrame(
                [
                    {"atom": f"atom {a}", "k": k, "term": float(seq.term(a, k))}
                    for a in range(seq.space.atom_count)
                    for k in range(stop)
                ]
            )
            picked = pd.DataFrame(
                [
                    {"atom": f"atom {a}", "k": n.values[a], "term": float(seq.term(a, n.values[a]))}
                    for n in indices
                    for a in range(seq.space.atom_count)
                ]
            )

            fig = Figure(figsize=VIZ_CONFIG.figure_size_large, dpi=VIZ_CONFIG.dpi)
            axes = fig.subplots(1, seq.space.atom_count, squeeze=False)[0]
            for a, ax in enumerate(axes):
                label = f"atom {a}"
                ax.plot(
                    terms[terms["atom"] == label]["k"],
                    terms[terms["atom"] == label]["term"],
                    linewidth=1,
                    alpha=0.6,
                )
                sns.scatterplot(data=picked[picked["atom"] == label], x="k", y="term", ax=ax, color="red")
                ax.axhline(float(target.values[a]), linestyle="--", color="gray")
                ax.set_title(f"{seq.name or 'sequence'}: {label}")
                ax.set_xlabel("index k")
                ax.set_ylabel("term")
                ax.grid(True, alpha=0.3)
            fig.tight_layout()
            return self._save(fig, filename)
        except Exception as e:
            print(f"Error creating BW plot: {str(e)}")
            raise

    def create_argmin_plot(self, selection: Selection, filename: str = "argmin_values.png") -> str:
        """Bar chart of the minimum value at each atom."""
        try:
            data = pd.DataFrame(
                {
                    "atom": [str(a) for a in range(selection.value.space.atom_count)],
                    "minimum": [float(v) for v in selection.value.values],
                }
            )
            fig = Figure(figsize=VIZ_CONFIG.figure_size_large, dpi=VIZ_CONFIG.dpi)
            ax = fig.add_subplot(111)
            sns.barplot(data=data, x="atom", y="minimum", ax=ax)
            ax.set_title("Conditional minimum by atom", pad=20)
            ax.set_xlabel("Atom")
            ax.set_ylabel("Minimum value")
            fig.tight_layout()
            return self._save(fig, filename)
        except Exception as e:
            print(f"Error creating argmin plot: {str(e)}")
            raise
