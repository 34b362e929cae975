"""Acceptance: every experiment preset renders to a figure, reproducibly."""

import time

from plots.render import render
from plots.spec import KIND_FOR_PRESET, FigureSpec
from shapecurrents.experiments import PRESETS


def test_criterion_15_all_presets_render_idempotently(artifact_root, tmp_path):
    start = time.monotonic()
    assert set(KIND_FOR_PRESET) == set(PRESETS)
    for preset, kind in sorted(KIND_FOR_PRESET.items()):
        first = tmp_path / f"{preset}.png"
        again = tmp_path / f"{preset}-again.png"
        render(FigureSpec.load(artifact_root / preset, kind, first))
        render(FigureSpec.load(artifact_root / preset, kind, again))
        assert first.stat().st_size > 0
        assert first.read_bytes() == again.read_bytes(), preset
    elapsed = time.monotonic() - start
    print(f"criterion 15: PASS {len(KIND_FOR_PRESET)} presets rendered "
          f"byte-identically in {elapsed:.1f}s")
    assert elapsed < 60.0
