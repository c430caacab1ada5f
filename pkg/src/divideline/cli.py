"""``divideline`` command line.

Every option can also come from a flat ``key = value`` config file given by
``--config``; command-line flags win over the file.  Exit status is 0 on
success, 2 for invalid input or configuration, 3 when a pipeline fails.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, errors
from .evaluate import (
    DEFAULT_LANDMARKS,
    Landmark,
    build_report,
    load_landmarks,
    point_to_polyline_km,
    polyline_length_km,
    write_report,
)
from .field_contour import (
    ContourSpec,
    contours_to_geojson,
    extract_contours,
    rank_contours,
    read_field_csv,
    run_brand_ensemble,
    run_gdhi_ensemble,
    write_field_csv,
)
from .geodata import (
    DEFAULT_BOUNDARY,
    ENGLAND_BBOX,
    GeoPoint,
    Polyline,
    load_boundary,
    load_income_csv,
    load_polylines,
    load_reference_line,
    load_store_csv,
    make_grid,
    polylines_to_geojson,
    synth_income,
    synth_two_brand,
    write_income_csv,
    write_store_csv,
)
from .linear_svm import SvmConfig, hyperplane_to_polyline, run_svm_ensemble
from .mlp import NetworkArch, TrainConfig
from .parallel import resolve_threads
from .render import (
    BoundaryLayer,
    HeatmapLayer,
    LandmarkLayer,
    LineLayer,
    PointsLayer,
    Scene,
    Viewport,
    line_styles,
    render_svg,
)
from .resample import ResamplePlan, SplitSpec

log = logging.getLogger("divideline")

EXIT_OK, EXIT_INVALID, EXIT_RUNTIME = 0, 2, 3

# built-in defaults, applied after the config file and flags
DEFAULTS = {
    "north_brand": "Greggs",
    "south_brand": "Pret",
    "boundary": str(DEFAULT_BOUNDARY),
    "landmarks": str(DEFAULT_LANDMARKS),
    "bbox": list(ENGLAND_BBOX),
    "grid_size": [300, 300],
    "resamples": 1000,
    "train_frac": 0.8,
    "stratify": True,
    "c": 1.0,
    "tol": 1e-4,
    "max_passes": 200,
    "hidden": [10],
    "activation": "relu",
    "lr": 0.05,
    "epochs": 2000,
    "l2": 1e-4,
    "target_loss": 1e-6,
    "level": 0.5,
    "seed_ensemble": 10,
    "samples": 200,
    "width": 800.0,
    "aspect_cos_lat": False,
    "kind": "stores",
    "north": 500,
    "south": 500,
    "separation": 1.0,
    "noise": 0.15,
    "center_lon": -1.5,
    "center_lat": 52.5,
    "regions": 43,
}

# input files that must exist before a command starts
INPUT_KEYS = {
    "svm": ("stores", "boundary", "landmarks"),
    "ann": ("stores", "boundary", "landmarks"),
    "gdhi": ("income", "boundary", "landmarks"),
    "compare": ("landmarks", "reference"),
    "render": ("report_in", "field", "stores", "boundary", "reference", "landmarks"),
    "synth": (),
}


def read_config_file(path) -> dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    path = Path(path)
    if not path.is_file():
        raise errors.MissingFile(path)
    out = {}
    for n, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise errors.ConfigInvalid(f"{path}:{n}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def _bool(text: str) -> bool:
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


# --- parser -----------------------------------------------------------------------


def _add_data(p, stores=True):
    if stores:
        p.add_argument("--stores", help="CSV with header brand,lat,lon")
        p.add_argument("--north-brand", help="brand labelled +1 (default Greggs)")
        p.add_argument("--south-brand", help="brand labelled -1 (default Pret)")
    p.add_argument("--boundary", help="GeoJSON landmass polygon (default: bundled England outline)")
    p.add_argument("--bbox", nargs=4, type=float, metavar=("LON_MIN", "LON_MAX", "LAT_MIN", "LAT_MAX"))
    p.add_argument("--landmarks", help="CSV with header name,lat,lon")


def _add_split(p):
    p.add_argument("--seed", type=int, help="random seed (required)")
    p.add_argument("--train-frac", type=float)
    p.add_argument("--stratify", type=_bool, help="stratified split (default true)")


def _add_net(p):
    p.add_argument("--hidden", nargs="+", type=int, help="hidden layer sizes (default 10)")
    p.add_argument("--activation", choices=("relu", "tanh"))
    p.add_argument("--lr", type=float)
    p.add_argument("--epochs", type=int)
    p.add_argument("--l2", type=float)
    p.add_argument("--target-loss", type=float)
    p.add_argument("--grid-size", nargs=2, type=int, metavar=("N_LON", "N_LAT"))


def _add_outputs(p, field_out=True):
    p.add_argument("--out", help="GeoJSON line output")
    p.add_argument("--report", help="JSON report output")
    if field_out:
        p.add_argument("--field", help="CSV field dump (lon,lat,value)")
    p.add_argument("--svg", help="SVG figure output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="divideline", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", help="flat key = value config file")
    parser.add_argument("--threads", type=int, help="worker threads (env DIVIDELINE_THREADS)")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("svm", help="averaged linear SVM dividing line")
    _add_data(p)
    _add_split(p)
    p.add_argument("--resamples", type=int)
    p.add_argument("--c", type=float, help="box constraint")
    p.add_argument("--tol", type=float)
    p.add_argument("--max-passes", type=int)
    _add_outputs(p, field_out=False)

    p = sub.add_parser("ann", help="neural-network ensemble map and 0.5 contour")
    _add_data(p)
    _add_split(p)
    p.add_argument("--resamples", type=int)
    _add_net(p)
    p.add_argument("--level", type=float)
    p.add_argument("--model-dump", help="JSON dump of every trained network")
    _add_outputs(p)

    p = sub.add_parser("gdhi", help="income regression map and national-mean contour")
    p.add_argument("--income", help="CSV with header region,lat,lon,gdhi")
    p.add_argument("--national-mean", type=float, help="threshold income (default: mean of the file)")
    _add_data(p, stores=False)
    _add_split(p)
    p.add_argument("--seed-ensemble", type=int, help="networks averaged (default 10)")
    _add_net(p)
    p.add_argument("--model-dump")
    _add_outputs(p)

    p = sub.add_parser("compare", help="distances between lines, landmarks and a reference line")
    p.add_argument("--lines", nargs="+", help="GeoJSON files; the first LineString of each is used")
    p.add_argument("--landmarks")
    p.add_argument("--reference", help="reference line GeoJSON")
    p.add_argument("--reports", nargs="*", help="pipeline reports to take accuracies from")
    p.add_argument("--samples", type=int)
    p.add_argument("--out", help="JSON report output")

    p = sub.add_parser("render", help="SVG figure from pipeline outputs")
    p.add_argument("--report", dest="report_in", help="pipeline report JSON")
    p.add_argument("--field", help="field CSV for the heatmap")
    p.add_argument("--stores")
    p.add_argument("--north-brand")
    p.add_argument("--south-brand")
    p.add_argument("--boundary")
    p.add_argument("--lines", nargs="*", help="extra GeoJSON lines to overlay")
    p.add_argument("--reference")
    p.add_argument("--landmarks")
    p.add_argument("--bbox", nargs=4, type=float, metavar=("LON_MIN", "LON_MAX", "LAT_MIN", "LAT_MAX"))
    p.add_argument("--level", type=float)
    p.add_argument("--width", type=float)
    p.add_argument("--aspect-cos-lat", type=_bool, nargs="?", const=True)
    p.add_argument("--out", help="SVG output")

    p = sub.add_parser("synth", help="write a synthetic store or income CSV")
    p.add_argument("--kind", choices=("stores", "income"))
    p.add_argument("--north", type=int)
    p.add_argument("--south", type=int)
    p.add_argument("--separation", type=float)
    p.add_argument("--noise", type=float)
    p.add_argument("--center-lon", type=float)
    p.add_argument("--center-lat", type=float)
    p.add_argument("--north-brand")
    p.add_argument("--south-brand")
    p.add_argument("--regions", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="CSV output")
    return parser


def _subparser(parser, name):
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices[name]
    raise KeyError(name)


def _convert(action, text: str):
    conv = action.type or (lambda s: s)
    if action.nargs in ("+", "*") or isinstance(action.nargs, int):
        items = [t for t in text.replace(",", " ").split() if t]
        return [conv(t) for t in items]
    if action.nargs == "?" and action.const is not None and text == "":
        return action.const
    if action.choices is not None and text not in action.choices:
        raise ValueError(f"must be one of {sorted(action.choices)}")
    return conv(text)


def merge_config(parser, ns: argparse.Namespace, config: dict[str, str]) -> dict:
    """Combine flags, config-file entries and built-in defaults (in that priority)."""
    sub = _subparser(parser, ns.command)
    actions = {a.dest: a for a in sub._actions if a.dest != "help"}
    for opt in ("report",):  # the render subcommand reads --report into report_in
        if ns.command == "render" and opt in config:
            config = {**config, "report_in": config.pop(opt)}
    unknown = set(config) - set(actions) - {"threads", "verbose"}
    if unknown:
        raise errors.ConfigInvalid(f"unknown config key(s) for '{ns.command}': {', '.join(sorted(unknown))}")
    merged = {}
    for dest, action in actions.items():
        value = getattr(ns, dest, None)
        if value is None and dest in config:
            try:
                value = _convert(action, config[dest])
            except (TypeError, ValueError) as exc:
                raise errors.ConfigInvalid(f"config key {dest!r}: {exc}") from None
        if value is None:
            value = DEFAULTS.get(dest)
        merged[dest] = value
    threads = ns.threads if ns.threads is not None else config.get("threads")
    merged["threads"] = resolve_threads(int(threads) if threads is not None else None)
    return merged


_NOT_ECHOED = {"threads", "verbose", "out", "report", "field", "svg", "model_dump"}


@dataclass
class RunConfig:
    command: str
    options: dict = field(default_factory=dict)

    REQUIRED = {
        "svm": ("stores", "seed"),
        "ann": ("stores", "seed"),
        "gdhi": ("income", "seed"),
        "compare": ("lines",),
        "render": ("out",),
        "synth": ("seed", "out"),
    }

    def validate(self) -> None:
        o = self.options
        for key in self.REQUIRED[self.command]:
            if o.get(key) in (None, []):
                flag = "--" + key.replace("_", "-")
                raise errors.ConfigInvalid(f"'{self.command}' needs {flag}" + (" (no default seed)" if key == "seed" else ""))
        for key in INPUT_KEYS[self.command]:
            if o.get(key) and not Path(o[key]).is_file():
                raise errors.MissingFile(o[key])
        for path in (o.get("lines") or []) + (o.get("reports") or []):
            if not Path(path).is_file():
                raise errors.MissingFile(path)
        if o.get("seed") is not None and o["seed"] < 0:
            raise errors.ConfigInvalid("--seed must be non-negative")
        if o.get("threads", 1) < 1:
            raise errors.ConfigInvalid("--threads must be >= 1")

    def __getitem__(self, key):
        return self.options[key]

    def get(self, key, default=None):
        v = self.options.get(key)
        return default if v is None else v

    # typed views
    def split(self) -> SplitSpec:
        return SplitSpec(self["train_frac"], bool(self["stratify"]), self["seed"])

    def plan(self) -> ResamplePlan:
        return ResamplePlan(self["resamples"], self["seed"])

    def svm(self) -> SvmConfig:
        return SvmConfig(self["c"], self["tol"], self["max_passes"])

    def arch(self) -> NetworkArch:
        return NetworkArch(tuple(self["hidden"]), self["activation"])

    def train(self) -> TrainConfig:
        return TrainConfig(self["lr"], self["epochs"], self["seed"], self["l2"], self["target_loss"])

    def bbox(self) -> tuple:
        return tuple(float(v) for v in self["bbox"])

    def echo(self) -> dict:
        """Options recorded in reports.

        Thread count and output paths are left out: neither affects results,
        and omitting them keeps reports from identical runs byte-identical.
        """
        return {k: v for k, v in sorted(self.options.items()) if k not in _NOT_ECHOED}


# --- helpers ----------------------------------------------------------------------


def _write_json(path, obj) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _landmarks(cfg: RunConfig) -> list[Landmark]:
    return load_landmarks(cfg["landmarks"]) if cfg.get("landmarks") else []


def _landmark_distances(line: Polyline, landmarks) -> dict[str, float]:
    return {lm.name: point_to_polyline_km(lm.point, line) for lm in landmarks}


def _nearest_text(dists: dict[str, float]) -> str:
    if not dists:
        return "no landmarks"
    name = min(dists, key=dists.get)
    return f"nearest landmark {name} {dists[name]:.2f} km"


def _distribution(values) -> dict:
    v = np.asarray(values, dtype=float)
    q = np.quantile(v, [0.05, 0.25, 0.5, 0.75, 0.95]).tolist()
    return {
        "mean": math.fsum(v.tolist()) / len(v),
        "sd": float(v.std()),
        "min": float(v.min()),
        "max": float(v.max()),
        "q05": q[0],
        "q25": q[1],
        "median": q[2],
        "q75": q[3],
        "q95": q[4],
    }


def _scene(cfg: RunConfig, layers) -> Scene:
    vp = Viewport.fit(cfg.bbox(), cfg.get("width", 800.0), bool(cfg.get("aspect_cos_lat")))
    return Scene(vp, layers)


# --- subcommands ------------------------------------------------------------------


def cmd_svm(cfg: RunConfig) -> str:
    ds = load_store_csv(cfg["stores"], cfg["north_brand"], cfg["south_brand"])
    res = run_svm_ensemble(ds, cfg.plan(), cfg.split(), cfg.svm(), cfg["threads"])
    line = hyperplane_to_polyline(res.hyperplane, cfg.bbox())
    landmarks = _landmarks(cfg)
    dists = _landmark_distances(line, landmarks)
    length = polyline_length_km(line)
    report = {
        "model": "svm",
        "accuracy": res.accuracy,
        "averaged_accuracy": res.averaged_accuracy,
        "accuracy_distribution": _distribution(res.accuracies),
        "accuracies": res.accuracies,
        "hyperplane": res.hyperplane.to_dict(),
        "n_train": len(res.train),
        "n_test": len(res.test),
        "n_unconverged": res.n_unconverged,
        "line": line.coords.tolist(),
        "line_length_km": length,
        "landmark_distances_km": dists,
        "config": cfg.echo(),
    }
    if cfg.get("out"):
        props = {"name": "svm", "model": "svm", "accuracy": res.accuracy}
        _write_json(cfg["out"], polylines_to_geojson([(line, props)]))
    if cfg.get("report"):
        _write_json(cfg["report"], report)
    if cfg.get("svg"):
        mask = load_boundary(cfg["boundary"]) if cfg.get("boundary") else None
        layers = ([BoundaryLayer(mask)] if mask else []) + [PointsLayer(ds.coords, ds.labels), LineLayer(line, label="svm")]
        layers += [LandmarkLayer(lm.name, lm.point) for lm in landmarks]
        Path(cfg["svg"]).write_text(render_svg(_scene(cfg, layers)), encoding="utf-8")
    return (
        f"svm: accuracy {res.accuracy:.4f} (averaged plane {res.averaged_accuracy:.4f}); "
        f"line {length:.1f} km; {_nearest_text(dists)}"
    )


def _grid(cfg: RunConfig):
    mask = load_boundary(cfg["boundary"]) if cfg.get("boundary") else None
    n_lon, n_lat = cfg["grid_size"]
    return make_grid(cfg.bbox(), n_lon, n_lat, mask), mask


def _contour_outputs(cfg, fld, level, model, extra_report, layers_before):
    contours = rank_contours(extract_contours(fld, ContourSpec(level)))
    principal = contours[0]
    landmarks = _landmarks(cfg)
    dists = _landmark_distances(principal, landmarks)
    length = polyline_length_km(principal)
    report = {
        "model": model,
        **extra_report,
        "level": level,
        "n_contours": len(contours),
        "line": principal.coords.tolist(),
        "line_length_km": length,
        "contours": [c.coords.tolist() for c in contours],
        "landmark_distances_km": dists,
        "config": cfg.echo(),
    }
    if cfg.get("out"):
        _write_json(cfg["out"], contours_to_geojson(contours, level))
    if cfg.get("field"):
        write_field_csv(fld, cfg["field"])
    if cfg.get("report"):
        _write_json(cfg["report"], report)
    if cfg.get("svg"):
        layers = [HeatmapLayer(fld, level, 0.0, 1.0), *layers_before]
        layers += [LineLayer(c, width=2.0 if k == 0 else 1.0, label=f"{model} contour {k}") for k, c in enumerate(contours)]
        layers += [LandmarkLayer(lm.name, lm.point) for lm in landmarks]
        Path(cfg["svg"]).write_text(render_svg(_scene(cfg, layers)), encoding="utf-8")
    return length, dists


def cmd_ann(cfg: RunConfig) -> str:
    ds = load_store_csv(cfg["stores"], cfg["north_brand"], cfg["south_brand"])
    grid, mask = _grid(cfg)
    keep = bool(cfg.get("model_dump"))
    res = run_brand_ensemble(ds, grid, cfg.plan(), cfg.split(), cfg.arch(), cfg.train(), cfg["threads"], keep)
    extra = {
        "accuracy": res.accuracy,
        "averaged_accuracy": res.averaged_accuracy,
        "accuracy_distribution": _distribution(res.accuracies),
        "accuracies": res.accuracies,
        "n_train": len(res.train),
        "n_test": len(res.test),
    }
    layers = [BoundaryLayer(mask)] if mask else []
    length, dists = _contour_outputs(cfg, res.field, cfg["level"], "ann", extra, layers)
    if keep:
        _write_json(cfg["model_dump"], {"networks": [n.to_dict() for n in res.networks]})
    return f"ann: accuracy {res.accuracy:.4f} (averaged map {res.averaged_accuracy:.4f}); principal contour {length:.1f} km; {_nearest_text(dists)}"


def cmd_gdhi(cfg: RunConfig) -> str:
    income = load_income_csv(cfg["income"], cfg.get("national_mean"))
    grid, mask = _grid(cfg)
    keep = bool(cfg.get("model_dump"))
    res = run_gdhi_ensemble(income, grid, cfg.arch(), cfg.train(), cfg.split(), cfg["seed_ensemble"], cfg["threads"], keep)
    extra = {
        "accuracy": res.accuracy,
        "r2": res.r2,
        "scores": res.scores,
        "gdhi_min": res.lo,
        "gdhi_max": res.hi,
        "national_mean": income.national_mean,
        "n_records": len(income.records),
        "n_train": res.n_train,
        "n_test": res.n_test,
    }
    layers = [BoundaryLayer(mask)] if mask else []
    length, dists = _contour_outputs(cfg, res.field, res.level, "gdhi", extra, layers)
    if keep:
        _write_json(cfg["model_dump"], {"networks": [n.to_dict() for n in res.networks]})
    return f"gdhi: score {res.accuracy:.4f} (R2 {res.r2:.3f}); level {res.level:.5f}; principal contour {length:.1f} km; {_nearest_text(dists)}"


def cmd_compare(cfg: RunConfig) -> str:
    lines = {}
    for path in cfg["lines"]:
        name = Path(path).stem
        while name in lines:
            name += "'"
        lines[name] = load_polylines(path)[0][0]
    reference = load_reference_line(cfg["reference"]) if cfg.get("reference") else None
    accuracies = {}
    for path in cfg.get("reports") or []:
        rep = json.loads(Path(path).read_text(encoding="utf-8"))
        if "accuracy" in rep:
            accuracies[Path(path).stem] = rep["accuracy"]
    report = build_report(lines, _landmarks(cfg), reference, accuracies, cfg["samples"])
    if cfg.get("out"):
        write_report(report, cfg["out"])
    parts = []
    for name, d in report.landmark_distances.items():
        parts.append(f"{name}: {_nearest_text(d)}")
    for key, d in report.line_discrepancy.items():
        parts.append(f"{key}: mean {d['mean_km']:.1f} km, Hausdorff {d['hausdorff_km']:.1f} km")
    return "compare: " + "; ".join(parts)


def cmd_render(cfg: RunConfig) -> str:
    layers = []
    report = json.loads(Path(cfg["report_in"]).read_text(encoding="utf-8")) if cfg.get("report_in") else {}
    bbox = tuple(report.get("config", {}).get("bbox") or cfg.bbox())
    level = cfg.get("level", report.get("level", 0.5))
    if cfg.get("field"):
        fld = read_field_csv(cfg["field"])
        layers.append(HeatmapLayer(fld, level, 0.0, 1.0))
    if cfg.get("boundary"):
        layers.append(BoundaryLayer(load_boundary(cfg["boundary"])))
    if cfg.get("stores"):
        ds = load_store_csv(cfg["stores"], cfg["north_brand"], cfg["south_brand"])
        layers.append(PointsLayer(ds.coords, ds.labels))
    styles = line_styles()
    k = 0
    if report.get("line"):
        layers.append(LineLayer(Polyline(report["line"]), label=report.get("model")))
        k += 1
    for path in cfg.get("lines") or []:
        for line, props in load_polylines(path):
            color, dash = styles[k % len(styles)]
            layers.append(LineLayer(line, color=color, dash=dash, label=props.get("name") or Path(path).stem))
            k += 1
    if cfg.get("reference"):
        ref = load_reference_line(cfg["reference"])
        layers.append(LineLayer(ref.polyline, color="#666666", dash="6 3", label=ref.name))
    layers += [LandmarkLayer(lm.name, lm.point) for lm in _landmarks(cfg)]
    vp = Viewport.fit(bbox, cfg.get("width", 800.0), bool(cfg.get("aspect_cos_lat")))
    Path(cfg["out"]).write_text(render_svg(Scene(vp, layers)), encoding="utf-8")
    return f"render: {len(layers)} layer(s) -> {cfg['out']}"


def cmd_synth(cfg: RunConfig) -> str:
    if cfg["kind"] == "income":
        income = synth_income(cfg["regions"], cfg["seed"])
        write_income_csv(income, cfg["out"])
        return f"synth: {len(income.records)} income regions -> {cfg['out']}"
    ds = synth_two_brand(
        cfg["north"],
        cfg["south"],
        cfg["separation"],
        cfg["noise"],
        cfg["seed"],
        center=(cfg["center_lon"], cfg["center_lat"]),
        brand_names=(cfg["north_brand"], cfg["south_brand"]),
    )
    write_store_csv(ds, cfg["out"])
    return f"synth: {ds.count(1)} {ds.brand_names[0]} + {ds.count(-1)} {ds.brand_names[1]} stores -> {cfg['out']}"


COMMANDS = {
    "svm": cmd_svm,
    "ann": cmd_ann,
    "gdhi": cmd_gdhi,
    "compare": cmd_compare,
    "render": cmd_render,
    "synth": cmd_synth,
}


def run(command: str, cfg: RunConfig) -> str:
    cfg.validate()
    return COMMANDS[command](cfg)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INVALID
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        config = read_config_file(ns.config) if ns.config else {}
        cfg = RunConfig(ns.command, merge_config(parser, ns, config))
        summary = run(ns.command, cfg)
    except errors.InputError as exc:
        print(f"divideline: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (errors.DividelineError, ValueError, OSError) as exc:
        print(f"divideline: {ns.command} failed: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    print(summary)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
