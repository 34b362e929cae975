"""Named, reproducible experiment presets.

Each preset writes a directory of CSV artifacts (full double precision), a
``summary.json`` with headline numbers (6 significant digits), a
``config.json`` echoing the exact run parameters, and a ``manifest.json``
documenting the column contract of every artifact so that downstream
plotting tools can validate their inputs.
"""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field

import numpy as np

from .curve import (
    FourierCoeffs,
    SampledCurve,
    bowtie,
    circle,
    fourier_shape,
    polyline_length,
    random_fourier_coeffs,
    reparameterize,
    supercircle,
    wiggly_circle,
)
from .currents import evaluate_current
from .embed import (
    build_dataset,
    class_separation,
    fish_family,
    mds_stress,
    pca,
    random_shape_population,
    supercircle_family,
    three_class_population,
)
from .errors import ConfigurationError
from .gram import DEFAULT_SIGMA, GramOperator
from .metric import distance, dual_norm, representer, representer_field_eval, richardson
from .reconstruct import cell_jumps, reconstruct_pc
from .space import build_space


@dataclass
class ExperimentConfig:
    preset: str
    mesh: int = 80
    degree: int = 1
    monomial: int = 10
    sigma: float = DEFAULT_SIGMA
    s: int = 1
    rule: str = "midpoint"
    points: int = 512
    seed: int = 0
    domain: tuple = (-1.0, 1.0, -1.0, 1.0)
    out: str = "."
    extra: dict = field(default_factory=dict)

    def to_json(self):
        d = asdict(self)
        d["domain"] = list(self.domain)
        return d

    @classmethod
    def from_json(cls, d):
        d = dict(d)
        d["domain"] = tuple(d.get("domain", (-1.0, 1.0, -1.0, 1.0)))
        return cls(**d)


def _round_sig(x, ndigits=6):
    """Round floats (recursively through containers) to significant digits."""
    if isinstance(x, dict):
        return {k: _round_sig(v, ndigits) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_round_sig(v, ndigits) for v in x]
    if isinstance(x, (np.floating, float)):
        x = float(x)
        if x == 0.0 or not np.isfinite(x):
            return x
        return float(f"{x:.{ndigits}g}")
    if isinstance(x, (np.integer, int)):
        return int(x)
    return x


def write_csv(path, header, rows):
    """Write rows of floats/strings with full double precision."""
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            cells = []
            for v in row:
                if isinstance(v, str):
                    cells.append(v)
                elif isinstance(v, (int, np.integer)):
                    cells.append(str(int(v)))
                else:
                    cells.append(f"{float(v):.17g}")
            fh.write(",".join(cells) + "\n")


class ArtifactWriter:
    """Collects artifacts for one preset run and emits the manifest."""

    def __init__(self, cfg: ExperimentConfig, figure: str):
        self.cfg = cfg
        self.figure = figure
        self.outdir = os.path.join(cfg.out, cfg.preset)
        os.makedirs(self.outdir, exist_ok=True)
        self.artifacts = {}

    def csv(self, name, header, rows, description=""):
        path = os.path.join(self.outdir, name)
        write_csv(path, header, rows)
        self.artifacts[name] = {"columns": list(header), "description": description}
        return path

    def finish(self, summary):
        with open(os.path.join(self.outdir, "summary.json"), "w") as fh:
            json.dump(_round_sig(summary), fh, indent=2)
        with open(os.path.join(self.outdir, "config.json"), "w") as fh:
            json.dump(self.cfg.to_json(), fh, indent=2)
        manifest = {
            "preset": self.cfg.preset,
            "figure": self.figure,
            "artifacts": self.artifacts,
        }
        with open(os.path.join(self.outdir, "manifest.json"), "w") as fh:
            json.dump(manifest, fh, indent=2)
        return summary


def _embedding_rows(labels, tags, coords):
    if tags is None:
        tags = ["0"] * len(labels)
    return [
        (str(lab), str(tag), x, y)
        for lab, tag, (x, y) in zip(labels, tags, coords)
    ]


def _fit_slope(x, y):
    return float(np.polyfit(np.log(np.asarray(x, float)), np.log(np.asarray(y, float)), 1)[0])


# ---------------------------------------------------------------------------
# presets


def preset_reparam(cfg: ExperimentConfig):
    w = ArtifactWriter(cfg, "table-heatmap")
    curve = bowtie(cfg.points)
    pert = reparameterize(curve, cfg.extra.get("sigma_t", 0.1), seed=cfg.seed)
    space = build_space("lagrange", M=cfg.mesh, degree=cfg.degree, domain=cfg.domain)
    G = GramOperator(space, sigma=cfg.sigma)
    f0 = evaluate_current(curve, space, rule=cfg.rule)
    f1 = evaluate_current(pert, space, rule=cfg.rule)
    rows, rel = [], {}
    for s in (1, 2):
        n0 = dual_norm(f0, G, s)
        n1 = dual_norm(f1, G, s)
        r = abs(n1 - n0) / n0
        rows.append((s, n0, n1, r))
        rel[f"rel_diff_s{s}"] = r
    w.csv("norms.csv", ["s", "norm_base", "norm_reparam", "rel_diff"], rows,
          "Dual norms of a curve before/after arclength reparameterization")
    return w.finish(rel)


def preset_quad_convergence(cfg: ExperimentConfig):
    w = ArtifactWriter(cfg, "loglog")
    rng = np.random.default_rng(cfg.seed)
    coeffs = random_fourier_coeffs(rng)
    space = build_space("monomial", N=cfg.extra.get("N", 4), domain=cfg.domain)
    n_ref = cfg.extra.get("n_ref", 32768)
    ref = evaluate_current(fourier_shape(coeffs, n_ref), space, rule="simpson").stacked()
    ns = [64 * 2 ** k for k in range(6)]
    rows = []
    for n in ns:
        curve = fourier_shape(coeffs, n)
        ds = polyline_length(curve) / n
        errs = {}
        for rule in ("midpoint", "simpson"):
            f = evaluate_current(curve, space, rule=rule).stacked()
            errs[rule] = float(np.max(np.abs(f - ref)))
        rows.append((n, ds, errs["midpoint"], errs["simpson"]))
    w.csv("errors.csv", ["n_points", "ds", "err_midpoint", "err_simpson"], rows,
          "Max current-entry quadrature error vs segment length, both rules")
    ds = [r[1] for r in rows]
    summary = {
        "slope_midpoint": _fit_slope(ds, [r[2] for r in rows]),
        "slope_simpson": _fit_slope(ds, [r[3] for r in rows]),
    }
    return w.finish(summary)


def preset_noise_robustness(cfg: ExperimentConfig):
    from .curve import add_noise, segment_line

    w = ArtifactWriter(cfg, "loglog")
    n = cfg.extra.get("n", 64)
    trials = cfg.extra.get("trials", 200)
    base = segment_line(n)
    space = build_space("monomial", N=cfg.extra.get("N", 3), domain=cfg.domain)
    f0 = evaluate_current(base, space, rule="midpoint").stacked()
    len0 = polyline_length(base)
    eps_list = cfg.extra.get("eps", [1e-5, 2e-5, 4e-5, 8e-5, 1.6e-4, 3.2e-4])
    rows = []
    for i, eps in enumerate(eps_list):
        errs = np.empty(trials)
        dlen = np.empty(trials)
        for t in range(trials):
            noisy = add_noise(base, eps, seed=cfg.seed + 1000 * i + t,
                              fix_endpoints=True)
            f = evaluate_current(noisy, space, rule="midpoint").stacked()
            errs[t] = np.linalg.norm(f - f0)
            dlen[t] = polyline_length(noisy) - len0
        rows.append((eps, float(np.std(errs)), float(np.mean(dlen))))
    w.csv("noise.csv", ["eps", "current_err_std", "arclength_bias"], rows,
          "Monte Carlo response of currents and arclength to point noise")
    eps = [r[0] for r in rows]
    summary = {
        "slope_current_std": _fit_slope(eps, [r[1] for r in rows]),
        "slope_arclength_bias": _fit_slope(eps, [abs(r[2]) for r in rows]),
        "trials": trials,
    }
    return w.finish(summary)


def _rough_coeffs(decay: float, rng) -> FourierCoeffs:
    coeffs = {0: 0.0, 1: 0.5, -1: 0.0}
    for k in range(2, 33):
        mag = k ** (-decay)
        coeffs[k] = mag * (rng.standard_normal() + 1j * rng.standard_normal()) / np.sqrt(2)
    return FourierCoeffs(coeffs)


def preset_rough_shapes(cfg: ExperimentConfig):
    w = ArtifactWriter(cfg, "loglog")
    space = build_space("monomial", N=cfg.extra.get("N", 3), domain=cfg.domain)
    decays = [1.5, 2.0, 3.0]
    n_ref = cfg.extra.get("n_ref", 65536)
    ns = [32 * 2 ** k for k in range(7)]
    rows = []
    err_at_256 = {}
    for decay in decays:
        rng = np.random.default_rng(cfg.seed)
        coeffs = _rough_coeffs(decay, rng)
        ref = evaluate_current(fourier_shape(coeffs, n_ref), space, rule="midpoint").stacked()
        scale = float(np.max(np.abs(ref)))
        for n in ns:
            f = evaluate_current(fourier_shape(coeffs, n), space, rule="midpoint").stacked()
            err = float(np.max(np.abs(f - ref))) / scale
            rows.append((decay, n, err))
            if n == 256:
                err_at_256[f"decay_{decay}"] = err
    w.csv("errors.csv", ["decay", "n_points", "rel_error"], rows,
          "Relative quadrature error vs point count for rough Fourier shapes")
    return w.finish({"rel_error_at_256": err_at_256})


def preset_metric_convergence(cfg: ExperimentConfig):
    w = ArtifactWriter(cfg, "loglog")
    curve = circle(0.5, cfg.extra.get("n", 5000))
    Ms = cfg.extra.get("meshes", [8, 16, 32, 64, 128])
    rows = []
    for M in Ms:
        space = build_space("lagrange", M=M, degree=cfg.degree, domain=cfg.domain)
        G = GramOperator(space, sigma=cfg.sigma)
        f = evaluate_current(curve, space, rule=cfg.rule)
        rows.append((M, dual_norm(f, G, 1), dual_norm(f, G, 2)))
    w.csv("norms.csv", ["M", "norm_h1", "norm_h2"], rows,
          "Dual norms of a circle vs mesh refinement")
    n1 = np.array([r[1] for r in rows])
    n2 = np.array([r[2] for r in rows])
    d1, d2 = np.abs(np.diff(n1)), np.abs(np.diff(n2))
    w.csv("differences.csv", ["M", "diff_h1", "diff_h2"],
          list(zip(Ms[:-1], d1, d2)),
          "Successive norm differences |N_2M - N_M|")
    summary = {
        "slope_h1": -_fit_slope(Ms[:-1], d1),
        "slope_h2": -_fit_slope(Ms[:-1], d2),
    }
    return w.finish(summary)


def preset_wiggly_table(cfg: ExperimentConfig):
    w = ArtifactWriter(cfg, "table-heatmap")
    n = cfg.extra.get("n", 5000)
    Ms = cfg.extra.get("meshes", [80, 160, 320])
    eps_list = cfg.extra.get("eps", [0.1, 0.05, 0.025])
    omegas = cfg.extra.get("omegas", [2, 4, 8, 16, 32, 64])
    # extrapolation orders match the measured piecewise-linear convergence
    # rates of the two norms (1 and 2 respectively)
    orders = {1: 1.0, 2: 2.0}
    base = circle(0.5, n)
    spaces, grams, base_currents = [], [], []
    for M in Ms:
        space = build_space("lagrange", M=M, degree=cfg.degree, domain=cfg.domain)
        spaces.append(space)
        grams.append(GramOperator(space, sigma=cfg.sigma))
        base_currents.append(evaluate_current(base, space, rule=cfg.rule))
    rows = []
    for omega in omegas:
        for eps in eps_list:
            pert = wiggly_circle(eps, omega, n)
            vals = {1: [], 2: []}
            for space, G, f0 in zip(spaces, grams, base_currents):
                f1 = evaluate_current(pert, space, rule=cfg.rule)
                for s in (1, 2):
                    vals[s].append(distance(f0, f1, G, s))
            d1 = richardson(vals[1], orders[1])
            d2 = richardson(vals[2], orders[2])
            rows.append((omega, eps, d1, d2))
    w.csv("table.csv", ["omega", "eps", "dist_h1", "dist_h2"], rows,
          "Richardson-extrapolated distances circle vs wiggly perturbation")
    summary = {"entries": len(rows) * 2,
               "first_h1": rows[0][2], "first_h2": rows[0][3]}
    return w.finish(summary)


def preset_supercircle_norms(cfg: ExperimentConfig):
    w = ArtifactWriter(cfg, "table-heatmap")
    space = build_space("lagrange", M=cfg.mesh, degree=cfg.degree, domain=cfg.domain)
    G = GramOperator(space, sigma=cfg.sigma)
    r_exps = cfg.extra.get("r_exps", [2.0 ** 2, 2.0 ** 1.5, 2.0 ** 1, 2.0 ** 0.5])
    rows = []
    for r in r_exps:
        f = evaluate_current(supercircle(r, cfg.points), space, rule=cfg.rule)
        rows.append((r, dual_norm(f, G, 1) ** 2, dual_norm(f, G, 2) ** 2))
    w.csv("norms.csv", ["r_exp", "sq_norm_h1", "sq_norm_h2"], rows,
          "Squared dual norms along the supercircle family")
    summary = {
        "sq_norm_h1": [r[1] for r in rows],
        "sq_norm_h2": [r[2] for r in rows],
    }
    return w.finish(summary)


def preset_supercircle_pca(cfg: ExperimentConfig):
    w = ArtifactWriter(cfg, "scatter")
    curves, labels = supercircle_family(13, cfg.points)
    space = build_space("lagrange", M=cfg.extra.get("M", 10), degree=1, domain=cfg.domain)
    G = GramOperator(space, sigma=cfg.sigma)
    ds = build_dataset(curves, space, G, s=cfg.s, rule=cfg.rule, labels=labels)
    emb = pca(ds, 2)
    w.csv("embedding.csv", ["label", "class", "x", "y"],
          _embedding_rows(ds.labels, ds.tags, emb.coords),
          "2D PCA embedding of the supercircle family")
    return w.finish({"explained_variance": list(emb.explained_variance)})


def _moment_dataset(cfg, curves, labels, tags=None):
    space = build_space("monomial", N=cfg.monomial, domain=cfg.domain)
    G = GramOperator(space, sigma=cfg.sigma)
    return build_dataset(curves, space, G, s=cfg.s, rule=cfg.rule,
                         labels=labels, tags=tags)


def _write_distance_matrix(w, ds, name="distances.csv"):
    dist = ds.distance_matrix()
    header = [str(lab) for lab in ds.labels]
    w.csv(name, header, [tuple(row) for row in dist],
          "Pairwise dual-norm distance matrix (square, row order = labels)")
    return dist


def preset_random_shapes_mds(cfg: ExperimentConfig):
    w = ArtifactWriter(cfg, "scatter")
    curves, labels = random_shape_population(32, cfg.points, seed=cfg.seed)
    ds = _moment_dataset(cfg, curves, labels)
    dist = _write_distance_matrix(w, ds)
    emb = mds_stress(dist, pca(ds, 2))
    w.csv("embedding.csv", ["label", "class", "x", "y"],
          _embedding_rows(ds.labels, ds.tags, emb.coords),
          "Stress-optimized planar embedding of random smooth shapes")
    return w.finish({"mean_abs_error": emb.mean_abs_error, "stress": emb.stress})


def preset_fish_family(cfg: ExperimentConfig):
    w = ArtifactWriter(cfg, "scatter")
    curves, labels = fish_family(16, cfg.points, seed=3)
    ds = _moment_dataset(cfg, curves, labels)
    dist = _write_distance_matrix(w, ds)
    emb = mds_stress(dist, pca(ds, 2))
    w.csv("embedding.csv", ["label", "class", "x", "y"],
          _embedding_rows(ds.labels, ds.tags, emb.coords),
          "Planar embedding of a one-parameter family of shapes")
    return w.finish({"mean_abs_error": emb.mean_abs_error, "stress": emb.stress})


def preset_three_class_pca(cfg: ExperimentConfig):
    w = ArtifactWriter(cfg, "scatter")
    curves, labels, tags = three_class_population(10, cfg.points, seed=5)
    ds = _moment_dataset(cfg, curves, labels, tags=tags)
    emb = pca(ds, 2)
    w.csv("embedding.csv", ["label", "class", "x", "y"],
          _embedding_rows(ds.labels, ds.tags, emb.coords),
          "2D PCA embedding of three seeded shape classes")
    sep = class_separation(emb, ds.tags)
    return w.finish({"pairwise_accuracy": sep})


def preset_line_distance(cfg: ExperimentConfig):
    from .metric import line_distance_per_unit_length

    w = ArtifactWriter(cfg, "loglog")
    M = cfg.extra.get("M", 320)
    space = build_space("lagrange", M=M, degree=cfg.degree, domain=cfg.domain)
    G = GramOperator(space, sigma=cfg.sigma)
    x0, x1 = cfg.domain[0], cfg.domain[1]
    n = cfg.points
    rows = []
    for eps in cfg.extra.get("eps", [0.05, 0.1, 0.2]):
        lines = []
        for y in (-eps / 2, eps / 2):
            xs = np.linspace(x0, x1, n)
            pts = np.column_stack([xs, np.full(n, y)])
            lines.append(SampledCurve(np.arange(n) / n, pts, closed=False))
        f0 = evaluate_current(lines[0], space, rule=cfg.rule)
        f1 = evaluate_current(lines[1], space, rule=cfg.rule)
        # the analytic per-unit-length kernel measures length in units of
        # sigma: ||f||^2 = (L / sigma) * 2 (K(0) - K(eps / sigma))
        length = x1 - x0
        for s in (1, 2):
            d = distance(f0, f1, G, s) * np.sqrt(cfg.sigma / length)
            ref = line_distance_per_unit_length(s, eps, cfg.sigma)
            rows.append((eps, s, d, ref, abs(d - ref) / ref))
    w.csv("line_distance.csv", ["eps", "s", "discrete", "analytic", "rel_err"], rows,
          "Distance per unit length between parallel lines vs analytic kernel")
    return w.finish({"max_rel_err": max(r[4] for r in rows)})


def preset_representer_field(cfg: ExperimentConfig):
    w = ArtifactWriter(cfg, "quiver")
    rng = np.random.default_rng(cfg.seed)
    curve = fourier_shape(random_fourier_coeffs(rng), cfg.points)
    space = build_space("monomial", N=cfg.monomial, domain=cfg.domain)
    G = GramOperator(space, sigma=cfg.sigma)
    f = evaluate_current(curve, space, rule=cfg.rule)
    rep = representer(f, G, s=cfg.s)
    grid_n = cfg.extra.get("grid", 30)
    xs = np.linspace(cfg.domain[0], cfg.domain[1], grid_n)
    ys = np.linspace(cfg.domain[2], cfg.domain[3], grid_n)
    X, Y = np.meshgrid(xs, ys)
    pts = np.column_stack([X.ravel(), Y.ravel()])
    field = representer_field_eval(rep, space, pts)
    bx, by = field[:, 0], field[:, 1]
    mag = np.hypot(bx, by)
    w.csv("field.csv", ["x", "y", "bx", "by", "mag"],
          list(zip(pts[:, 0], pts[:, 1], bx, by, mag)),
          "Representer vector field sampled on a uniform grid")
    w.csv("curve.csv", ["x", "y"],
          [tuple(p) for p in curve.points],
          "Sampled points of the source curve")
    corners = np.array([[cfg.domain[0], cfg.domain[2]], [cfg.domain[0], cfg.domain[3]],
                        [cfg.domain[1], cfg.domain[2]], [cfg.domain[1], cfg.domain[3]]])
    corner_field = representer_field_eval(rep, space, corners)
    summary = {
        "max_magnitude": float(np.max(mag)),
        "corner_max_magnitude": float(np.max(np.hypot(corner_field[:, 0],
                                                      corner_field[:, 1]))),
    }
    return w.finish(summary)


def preset_reconstruct_convergence(cfg: ExperimentConfig):
    w = ArtifactWriter(cfg, "loglog")
    n = cfg.extra.get("n", 5000)
    center = tuple(cfg.extra.get("center", (0.0618, 0.0271)))
    radius = cfg.extra.get("radius", 0.5)
    Ms = cfg.extra.get("meshes", [10, 20, 40, 80])
    curve = circle(radius, n, center=center, phase=0.5 / n)
    rows = []
    for M in Ms:
        space = build_space("lagrange", M=M, degree=1, domain=cfg.domain)
        mesh = space.mesh
        dx, dy = cell_jumps(curve, mesh)
        rec = reconstruct_pc(dx, dy, mesh)
        # sample densely along each reconstructed segment to measure the
        # worst-case deviation from the true circle
        pts = rec.points
        nxt = np.roll(pts, -1, axis=0) if rec.closed else pts[1:]
        cur = pts if rec.closed else pts[:-1]
        ts = np.linspace(0.0, 1.0, 20)[None, :, None]
        dense = cur[:, None, :] * (1 - ts) + nxt[:, None, :] * ts
        dense = dense.reshape(-1, 2)
        err = float(np.max(np.abs(np.hypot(dense[:, 0] - center[0],
                                           dense[:, 1] - center[1]) - radius)))
        rows.append((M, 2.0 / M, err))
    w.csv("errors.csv", ["M", "h", "hausdorff_error"], rows,
          "Reconstruction error of the piecewise-constant pipeline vs mesh size")
    summary = {"slope": -_fit_slope([r[0] for r in rows], [r[2] for r in rows])}
    return w.finish(summary)


PRESETS = {
    "reparam": preset_reparam,
    "quad-convergence": preset_quad_convergence,
    "noise-robustness": preset_noise_robustness,
    "rough-shapes": preset_rough_shapes,
    "metric-convergence": preset_metric_convergence,
    "wiggly-table": preset_wiggly_table,
    "supercircle-norms": preset_supercircle_norms,
    "supercircle-pca": preset_supercircle_pca,
    "random-shapes-mds": preset_random_shapes_mds,
    "fish-family": preset_fish_family,
    "three-class-pca": preset_three_class_pca,
    "line-distance": preset_line_distance,
    "representer-field": preset_representer_field,
    "reconstruct-convergence": preset_reconstruct_convergence,
}

# figure kind consumed by the plotting component, one per preset
PRESET_FIGURES = {
    "reparam": "table-heatmap",
    "quad-convergence": "loglog",
    "noise-robustness": "loglog",
    "rough-shapes": "loglog",
    "metric-convergence": "loglog",
    "wiggly-table": "table-heatmap",
    "supercircle-norms": "table-heatmap",
    "supercircle-pca": "scatter",
    "random-shapes-mds": "scatter",
    "fish-family": "scatter",
    "three-class-pca": "scatter",
    "line-distance": "loglog",
    "representer-field": "quiver",
    "reconstruct-convergence": "loglog",
}


def run_preset(cfg: ExperimentConfig):
    if cfg.preset not in PRESETS:
        known = ", ".join(sorted(PRESETS))
        raise ConfigurationError(
            f"unknown preset {cfg.preset!r}; available presets: {known}")
    return PRESETS[cfg.preset](cfg)
