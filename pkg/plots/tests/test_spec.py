"""FigureSpec validation: mapping completeness and fail-fast input checks."""

import json

import pytest

from plots.spec import FIGURE_KINDS, KIND_FOR_PRESET, FigureSpec, SpecError
from shapecurrents.experiments import PRESET_FIGURES


def test_preset_mapping_complete_and_consistent():
    assert KIND_FOR_PRESET == PRESET_FIGURES
    assert set(KIND_FOR_PRESET.values()) <= set(FIGURE_KINDS)


def test_load_valid_directory(artifact_root, tmp_path):
    spec = FigureSpec.load(artifact_root / "quad-convergence", "loglog",
                           tmp_path / "out.png")
    assert "errors.csv" in spec.tables
    assert spec.manifest["preset"] == "quad-convergence"


def test_unknown_kind_rejected(artifact_root, tmp_path):
    with pytest.raises(SpecError, match="unknown figure kind"):
        FigureSpec.load(artifact_root / "quad-convergence", "piechart",
                        tmp_path / "out.png")


def test_kind_mismatch_rejected(artifact_root, tmp_path):
    with pytest.raises(SpecError, match="declares figure kind"):
        FigureSpec.load(artifact_root / "quad-convergence", "scatter",
                        tmp_path / "out.png")


def test_missing_manifest_rejected(tmp_path):
    with pytest.raises(SpecError, match="manifest"):
        FigureSpec.load(tmp_path, "loglog", tmp_path / "out.png")


def test_empty_csv_rejected(artifact_root, tmp_path):
    src = artifact_root / "quad-convergence"
    dst = tmp_path / "broken"
    dst.mkdir()
    (dst / "manifest.json").write_text((src / "manifest.json").read_text())
    (dst / "errors.csv").write_text("")
    with pytest.raises(SpecError, match="empty"):
        FigureSpec.load(dst, "loglog", tmp_path / "out.png")


def test_header_only_csv_rejected(artifact_root, tmp_path):
    src = artifact_root / "quad-convergence"
    dst = tmp_path / "broken"
    dst.mkdir()
    (dst / "manifest.json").write_text((src / "manifest.json").read_text())
    header = (src / "errors.csv").read_text().splitlines()[0]
    (dst / "errors.csv").write_text(header + "\n")
    with pytest.raises(SpecError, match="no data rows"):
        FigureSpec.load(dst, "loglog", tmp_path / "out.png")


def test_missing_required_column_rejected(artifact_root, tmp_path):
    src = artifact_root / "three-class-pca"
    dst = tmp_path / "broken"
    dst.mkdir()
    manifest = json.loads((src / "manifest.json").read_text())
    lines = (src / "embedding.csv").read_text().splitlines()
    # drop the y column from both the data and the manifest contract
    trimmed = [",".join(line.split(",")[:-1]) for line in lines]
    (dst / "embedding.csv").write_text("\n".join(trimmed) + "\n")
    manifest["artifacts"]["embedding.csv"]["columns"] = ["label", "class", "x"]
    (dst / "manifest.json").write_text(json.dumps(manifest))
    with pytest.raises(SpecError, match="required columns"):
        FigureSpec.load(dst, "scatter", tmp_path / "out.png")


def test_header_contract_mismatch_rejected(artifact_root, tmp_path):
    src = artifact_root / "quad-convergence"
    dst = tmp_path / "broken"
    dst.mkdir()
    manifest = json.loads((src / "manifest.json").read_text())
    manifest["artifacts"]["errors.csv"]["columns"][0] = "renamed"
    (dst / "manifest.json").write_text(json.dumps(manifest))
    (dst / "errors.csv").write_text((src / "errors.csv").read_text())
    with pytest.raises(SpecError, match="does not match"):
        FigureSpec.load(dst, "loglog", tmp_path / "out.png")
