"""Command-line front end: sweep execution, CSV/JSON results, SVG plots.

Exit codes: 0 success, 2 invalid configuration, 3 I/O failure.
"""

import argparse
import csv
import hashlib
import json
import sys

import numpy as np

from . import __version__, montecarlo, svgplot
from .circuit import build_circuit, squeezing_distance
from .lattice import CATALOG_NAMES, UnknownCodeError, catalog
from .montecarlo import DECODERS

CSV_HEADER = (
    "code,decoder,scaling,noisy_aux,sigma2_over_2pi,trials,"
    "logical_errors,p_l,ci_low,ci_high,seed"
)

_ALIASES = {"hex": "hexagonal", "hex_qsym": "hexagonal_qsym"}


class ConfigError(ValueError):
    pass


def parse_code(token):
    """A catalog name, optionally with `name:eta` for the eta families."""
    name, _, eta = token.partition(":")
    name = _ALIASES.get(name, name)
    try:
        return catalog(name, eta=float(eta)) if eta else catalog(name)
    except (UnknownCodeError, ValueError) as exc:
        raise ConfigError(
            f"bad code {token!r}: {exc} (known: {', '.join(CATALOG_NAMES)})"
        ) from exc


def parse_grid(spec):
    """`start:stop:count`, inclusive linear grid, strictly increasing."""
    parts = spec.split(":")
    if len(parts) != 3:
        raise ConfigError(f"grid must be start:stop:count, got {spec!r}")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ConfigError(f"bad grid {spec!r}: {exc}") from exc
    if count < 1 or (count > 1 and stop <= start) or start <= 0:
        raise ConfigError(f"grid {spec!r} must be positive and strictly increasing")
    return [float(x) for x in np.linspace(start, stop, count)]


def _parse_bool(text):
    if text.lower() in ("true", "1", "yes"):
        return True
    if text.lower() in ("false", "0", "no"):
        return False
    raise ConfigError(f"expected true/false, got {text!r}")


def _circuit_hash(circuit):
    return hashlib.sha256(
        np.ascontiguousarray(circuit.tbar.mat).tobytes()
    ).hexdigest()


def _format_row(est):
    return (
        f"{est.code},{est.decoder},{est.scaling},{str(est.noisy_aux).lower()},"
        f"{est.sigma2_over_2pi!r},{est.trials},{est.errors},"
        f"{est.p_l!r},{est.ci_low!r},{est.ci_high!r},{est.seed}"
    )


def cmd_simulate(args):
    try:
        codes = [parse_code(tok) for tok in args.codes.split(",") if tok]
        decoders = [d for d in args.decoders.split(",") if d]
        for d in decoders:
            if d not in DECODERS:
                raise ConfigError(f"unknown decoder {d!r}; expected {DECODERS}")
        if not codes or not decoders:
            raise ConfigError("need at least one code and one decoder")
        grid = parse_grid(args.sigma2)
        trials = int(float(args.trials))
        if trials < 1:
            raise ConfigError("trials must be >= 1")
        noisy_aux = _parse_bool(args.noisy_aux)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    results = montecarlo.sweep(
        codes, decoders, grid, trials, args.seed,
        scaling=args.scaling, noisy_aux=noisy_aux,
    )

    lines = [CSV_HEADER] + [_format_row(est) for est in results]
    provenance = {
        "tool": "gkpdec",
        "version": __version__,
        "backend": montecarlo.default_backend(),
        "config": {
            "codes": args.codes,
            "decoders": args.decoders,
            "scaling": args.scaling,
            "noisy_aux": noisy_aux,
            "sigma2_over_2pi": args.sigma2,
            "sigma2_grid": grid,
            "trials": trials,
            "seed": args.seed,
            "out_path": args.out,
        },
        "circuit_hashes": {
            code.name: _circuit_hash(build_circuit(code, args.scaling))
            for code in codes
        },
    }
    try:
        with open(args.out, "w") as fh:
            fh.write("\n".join(lines) + "\n")
        with open(args.out + ".provenance.json", "w") as fh:
            json.dump(provenance, fh, indent=2, sort_keys=True)
            fh.write("\n")
    except OSError as exc:
        print(f"error writing results: {exc}", file=sys.stderr)
        return 3
    return 0


def cmd_plot(args):
    try:
        with open(getattr(args, "in"), newline="") as fh:
            reader = csv.DictReader(fh)
            expected = CSV_HEADER.split(",")
            if reader.fieldnames != expected:
                print(
                    f"error: CSV header mismatch, expected {CSV_HEADER}",
                    file=sys.stderr,
                )
                return 2
            rows = list(reader)
    except OSError as exc:
        print(f"error reading CSV: {exc}", file=sys.stderr)
        return 2
    try:
        series = {}
        for row in rows:
            label = f"{row['code']}/{row['decoder']}"
            series.setdefault(label, []).append(
                (
                    float(row["sigma2_over_2pi"]),
                    float(row["p_l"]),
                    float(row["ci_low"]),
                    float(row["ci_high"]),
                )
            )
    except (KeyError, ValueError) as exc:
        print(f"error: malformed CSV row: {exc}", file=sys.stderr)
        return 2
    for rows_ in series.values():
        rows_.sort()
    try:
        svg = svgplot.render(sorted(series.items()))
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        with open(args.out, "w") as fh:
            fh.write(svg)
    except OSError as exc:
        print(f"error writing SVG: {exc}", file=sys.stderr)
        return 3
    return 0


def _read_results(path):
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != CSV_HEADER.split(","):
            raise ConfigError(f"CSV header mismatch, expected {CSV_HEADER}")
        return list(reader)


def cmd_zeta(args):
    """Estimate zeta*: the sigma^2/2pi at which p_L crosses a target rate,
    by piecewise log-linear interpolation of the measured curve. Points
    outside the measured range are extrapolated from the nearest segment
    and labeled as such."""
    try:
        rows = _read_results(getattr(args, "in"))
    except (OSError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    series = {}
    for row in rows:
        key = (row["code"], row["decoder"], row["scaling"], row["noisy_aux"])
        p = float(row["p_l"])
        if p > 0:
            series.setdefault(key, []).append((float(row["sigma2_over_2pi"]), p))
    out = []
    target = args.target
    for key, pts in sorted(series.items()):
        pts.sort()
        if len(pts) < 2:
            continue
        s = np.array([p[0] for p in pts])
        logp = np.log([p[1] for p in pts])
        logt = np.log(target)
        inside = logp.min() <= logt <= logp.max()
        if inside:
            idx = next(i for i in range(len(pts) - 1)
                       if min(logp[i], logp[i + 1]) <= logt <= max(logp[i], logp[i + 1]))
        elif abs(logt - logp[0]) < abs(logt - logp[-1]):
            idx = 0
        else:
            idx = len(pts) - 2
        a, b = idx, idx + 1
        if logp[b] == logp[a]:
            continue
        zeta = s[a] + (logt - logp[a]) * (s[b] - s[a]) / (logp[b] - logp[a])
        out.append({
            "code": key[0],
            "decoder": key[1],
            "scaling": key[2],
            "noisy_aux": key[3],
            "target_p_l": target,
            # a non-positive crossing means the measured grid is too far
            # from the target for a meaningful log-linear extrapolation
            "zeta_sigma2_over_2pi": zeta if zeta > 0 else None,
            "extrapolated": not inside,
        })
    json.dump(out, sys.stdout, indent=2)
    print()
    return 0


def cmd_inspect(args):
    try:
        code = parse_code(args.code)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    info = {
        "name": code.name,
        "modes": code.m,
        "d_code": code.d_code,
        "distance": code.distance,
        "basis": code.basis.tolist(),
        "gram": code.gram.tolist(),
        "dual_basis": code.dual_basis.tolist(),
        "logical_paulis": (
            code.logical_paulis.tolist() if code.logical_paulis is not None else None
        ),
        "relevant_vector_count": len(code.relevant_vectors),
        "circuits": {},
    }
    distances = {}
    for scaling in ("h", "hprime"):
        circ = build_circuit(code, scaling)
        distances[scaling] = squeezing_distance(circ)
        info["circuits"][scaling] = {
            "eta": circ.eta.tolist(),
            "nu": circ.nu.tolist(),
            "windows": circ.windows.tolist(),
            "squeezing_distance": distances[scaling],
            "tbar_sha256": _circuit_hash(circ),
        }
    info["d_cov_ratio_h_over_hprime"] = distances["h"] / distances["hprime"]
    json.dump(info, sys.stdout, indent=2)
    print()
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="gkpdec",
        description="Multimode GKP decoding experiments at the lattice level.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a Monte-Carlo sweep, write CSV")
    sim.add_argument("--codes", required=True,
                     help="comma list, e.g. square,hex,tesseract,d4")
    sim.add_argument("--decoders", default="med,cor-med",
                     help="comma list from {med,cor-med}")
    sim.add_argument("--scaling", default="hprime", choices=("h", "hprime"))
    sim.add_argument("--noisy-aux", default="true", dest="noisy_aux",
                     help="true|false: noise on the auxiliary modes")
    sim.add_argument("--sigma2", required=True,
                     help="sigma^2/2pi grid as start:stop:count (inclusive)")
    sim.add_argument("--trials", required=True, help="trials per cell")
    sim.add_argument("--seed", type=int, default=0, help="64-bit master seed")
    sim.add_argument("--out", required=True, help="output CSV path")
    sim.set_defaults(func=cmd_simulate)

    plot = sub.add_parser("plot", help="render a results CSV as SVG")
    plot.add_argument("--in", required=True, help="input CSV path")
    plot.add_argument("--out", required=True, help="output SVG path")
    plot.set_defaults(func=cmd_plot)

    zeta = sub.add_parser(
        "zeta", help="interpolate/extrapolate the noise level where p_L "
                     "crosses a target rate")
    zeta.add_argument("--in", required=True, help="input CSV path")
    zeta.add_argument("--target", type=float, default=1e-6,
                      help="target logical error rate (default 1e-6)")
    zeta.set_defaults(func=cmd_zeta)

    insp = sub.add_parser("inspect", help="print code and circuit data as JSON")
    insp.add_argument("--code", required=True)
    insp.set_defaults(func=cmd_inspect)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
