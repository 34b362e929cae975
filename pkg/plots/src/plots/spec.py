"""Figure specifications over experiment artifact directories.

An artifact directory is what `shapecurrents experiment` writes: data CSVs
plus a manifest.json declaring each CSV's columns. A FigureSpec binds such a
directory to one of the supported figure kinds and an output image path, and
validates the inputs up front; rendering never mutates them.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

FIGURE_KINDS = ("loglog", "scatter", "table-heatmap", "quiver")

# canonical preset -> figure-kind mapping; must stay in sync with the
# PRESET_FIGURES registry of the shapecurrents package (tested)
KIND_FOR_PRESET = {
    "reparam": "table-heatmap",
    "wiggly-table": "table-heatmap",
    "supercircle-norms": "table-heatmap",
    "quad-convergence": "loglog",
    "noise-robustness": "loglog",
    "rough-shapes": "loglog",
    "metric-convergence": "loglog",
    "line-distance": "loglog",
    "reconstruct-convergence": "loglog",
    "supercircle-pca": "scatter",
    "random-shapes-mds": "scatter",
    "fish-family": "scatter",
    "three-class-pca": "scatter",
    "representer-field": "quiver",
}

# columns each figure kind requires in at least one input CSV
REQUIRED_COLUMNS = {
    "scatter": {"embedding.csv": ["label", "class", "x", "y"]},
    "quiver": {"field.csv": ["x", "y", "bx", "by"], "curve.csv": ["x", "y"]},
    "loglog": {},
    "table-heatmap": {},
}


class SpecError(ValueError):
    """Invalid figure specification or artifact contents."""


@dataclass
class FigureSpec:
    """One artifact directory, one figure kind, one output image path."""

    indir: Path
    kind: str
    out: Path
    manifest: dict = field(default_factory=dict, repr=False)
    tables: dict = field(default_factory=dict, repr=False)

    @classmethod
    def load(cls, indir, kind, out) -> "FigureSpec":
        indir, out = Path(indir), Path(out)
        if kind not in FIGURE_KINDS:
            raise SpecError(f"unknown figure kind {kind!r}; expected one of "
                            + ", ".join(FIGURE_KINDS))
        manifest_path = indir / "manifest.json"
        if not manifest_path.exists():
            raise SpecError(f"no manifest.json in {indir}")
        manifest = json.loads(manifest_path.read_text())
        declared = manifest.get("figure")
        if declared is not None and declared != kind:
            raise SpecError(f"artifact directory declares figure kind "
                            f"{declared!r}, not {kind!r}")
        spec = cls(indir=indir, kind=kind, out=out, manifest=manifest)
        spec._load_tables()
        spec._check_columns()
        return spec

    def _load_tables(self):
        artifacts = self.manifest.get("artifacts", {})
        if not artifacts:
            raise SpecError(f"manifest in {self.indir} lists no artifacts")
        for name, info in artifacts.items():
            path = self.indir / name
            if not path.exists():
                raise SpecError(f"artifact {name} listed in manifest is missing")
            with open(path, newline="") as fh:
                rows = list(csv.reader(fh))
            if not rows:
                raise SpecError(f"artifact {name} is empty")
            header = rows[0]
            if header != info.get("columns", header):
                raise SpecError(f"artifact {name} header {header} does not "
                                f"match manifest columns {info['columns']}")
            if len(rows) < 2:
                raise SpecError(f"artifact {name} has a header but no data rows")
            self.tables[name] = {"columns": header, "rows": rows[1:]}

    def _check_columns(self):
        for name, needed in REQUIRED_COLUMNS[self.kind].items():
            if name not in self.tables:
                raise SpecError(f"{self.kind} figure requires artifact {name}")
            have = self.tables[name]["columns"]
            missing = [c for c in needed if c not in have]
            if missing:
                raise SpecError(f"artifact {name} lacks required columns "
                                + ", ".join(missing))

    def column(self, table: str, name: str) -> list:
        t = self.tables[table]
        j = t["columns"].index(name)
        return [row[j] for row in t["rows"]]
