"""Shared fixture: one fast artifact run per experiment preset."""

import pytest

from shapecurrents.experiments import PRESETS, ExperimentConfig, run_preset

# small meshes / sample counts so the full artifact corpus builds in seconds;
# figure rendering only needs representative data
FAST_OVERRIDES = {
    "reparam": dict(mesh=10, points=128),
    "quad-convergence": dict(extra={"n_ref": 4096}),
    "noise-robustness": dict(extra={"trials": 20}),
    "rough-shapes": dict(extra={"n_ref": 4096}),
    "metric-convergence": dict(extra={"n": 500, "meshes": [8, 16, 32]}),
    "wiggly-table": dict(extra={"n": 500, "meshes": [10, 20, 40],
                                "omegas": [2, 4], "eps": [0.1, 0.05]}),
    "supercircle-norms": dict(mesh=10, points=128),
    "supercircle-pca": dict(points=128, extra={"M": 6}),
    "random-shapes-mds": dict(points=64, monomial=6),
    "fish-family": dict(points=64, monomial=6),
    "three-class-pca": dict(points=64, monomial=6),
    "line-distance": dict(extra={"M": 40, "eps": [0.1, 0.2]}),
    "representer-field": dict(mesh=10, points=128, extra={"grid": 12}),
    "reconstruct-convergence": dict(extra={"n": 500, "meshes": [10, 20]}),
}


@pytest.fixture(scope="session")
def artifact_root(tmp_path_factory):
    root = tmp_path_factory.mktemp("artifacts")
    for preset in sorted(PRESETS):
        kwargs = dict(FAST_OVERRIDES.get(preset, {}))
        extra = kwargs.pop("extra", {})
        run_preset(ExperimentConfig(preset=preset, out=str(root),
                                    extra=extra, **kwargs))
    return root
