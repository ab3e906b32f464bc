"""Command-line front end: ``toricflips <subcommand> [options]``.

Exit codes: 0 on success, 2 when an input violates a precondition, 3 when an
internal verification fails.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence

from . import actions as act
from .blowup import (
    WeightedBlowupSpec,
    chart_weights,
    exceptional_fiber,
    subdivision_report,
    weighted_star_subdivision,
)
from .cobordism import (
    bordism_fan,
    classify_flip,
    expected_index,
    facet_cone,
    make_setup,
    multiplicity_oracle,
    quotient_fans,
)
from .lattice import Cone, Fan, LatticeError, cone_index, project_cone

EXIT_OK, EXIT_PRECONDITION, EXIT_INTERNAL = 0, 2, 3
_INT64 = 2 ** 63


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _jsonable(x):
    """Make a report JSON-safe: big ints and fractions become strings."""
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return str(x) if abs(x) >= _INT64 else x
    if isinstance(x, Fraction):
        return _jsonable(x.numerator) if x.denominator == 1 else str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if hasattr(x, "value"):
        return x.value
    raise TypeError(f"cannot serialize {type(x).__name__}")


def _text(x, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(x, dict):
        for k, v in x.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_inline(v)}")
    elif isinstance(x, list):
        for v in x:
            if isinstance(v, dict):
                sub = _text(v, indent + 1)
                lines.append(f"{pad}- {sub[0].strip()}")
                lines.extend(sub[1:])
            else:
                lines.append(f"{pad}- {_inline(v)}")
    else:
        lines.append(f"{pad}{_inline(x)}")
    return lines


def _flat(v) -> bool:
    return isinstance(v, list) and all(not isinstance(e, dict) for e in v) and len(_inline(v)) < 100


def _inline(v) -> str:
    return json.dumps(v, ensure_ascii=False, separators=(",", ":"))


def emit(report: dict, fmt: str, out=None) -> None:
    out = out or sys.stdout
    data = _jsonable(report)
    if fmt == "json":
        out.write(json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n")
    else:
        out.write("\n".join(_text(data)) + "\n")


def _cones(f: Fan) -> list[dict]:
    return [{"generators": [list(g) for g in c.generators], "index": cone_index(c)}
            for c in sorted(f.maximal_cones(), key=lambda c: (len(c.generators), c.generators))]


def _e_labels(c: Cone) -> str:
    idx = sorted(g.index(1) + 1 for g in c.generators)
    return "<" + ",".join(f"e{i}" for i in idx) + ">"


# ---------------------------------------------------------------------------
# subcommands


def _setup(args):
    return make_setup(args.q_neg, args.zeros, args.q_pos, unchecked=args.unchecked)


def run_cobordism(args) -> dict:
    setup = _setup(args)
    fans = quotient_fans(setup, samples=args.samples, seed=args.seed)
    cls = classify_flip(setup, fans)
    bf = bordism_fan(setup, fans)
    mult = {}
    for i in list(setup.positive_indices) + list(setup.negative_indices):
        c = project_cone(fans.projection, facet_cone(setup, i))
        mult[f"e{i + 1}"] = {"index": cone_index(c), "q": setup.weight(i),
                             "image_index": multiplicity_oracle(setup, i),
                             "expected_index": expected_index(setup, i)}
    return {
        "setup": setup.to_json(),
        "delta_plus_maximal": [_e_labels(c) for c in sorted(fans.delta_plus.maximal_cones(), key=lambda c: c.generators)],
        "delta_minus_maximal": [_e_labels(c) for c in sorted(fans.delta_minus.maximal_cones(), key=lambda c: c.generators)],
        "projection": [list(r) for r in fans.projection],
        "delta_bar": fans.delta_bar.to_json(),
        "sink_fan": _cones(fans.sink_fan),
        "source_fan": _cones(fans.source_fan),
        "sink_subdivision": fans.plus_report.to_json(),
        "source_subdivision": fans.minus_report.to_json(),
        "multiplicities": mult,
        "classification": cls.to_json(),
        "lambda_plus": _cones(bf.lambda_plus),
        "lambda_minus": _cones(bf.lambda_minus),
        "sigma_tilde": {"maximal_cones": _cones(bf.sigma_tilde), "valid": bf.report.valid,
                        "validation": bf.report.to_json()},
        "inner_fixed_dimension": bf.inner_dim,
    }


def run_bordism(args) -> dict:
    setup = _setup(args)
    fans = quotient_fans(setup, samples=args.samples, seed=args.seed)
    bf = bordism_fan(setup, fans)
    return {
        "setup": setup.to_json(),
        "lambda_plus": _cones(bf.lambda_plus),
        "lambda_minus": _cones(bf.lambda_minus),
        "sigma_tilde": {"maximal_cones": _cones(bf.sigma_tilde), "cone_count": len(bf.sigma_tilde),
                        "valid": bf.report.valid, "validation": bf.report.to_json()},
        "pieces": {k: v.valid for k, v in sorted(bf.piece_reports.items())},
        "inner_fixed_dimension": bf.inner_dim,
    }


def run_blowup(args) -> dict:
    spec = WeightedBlowupSpec.from_weights(args.d, args.omega, legacy=args.legacy)
    fan = weighted_star_subdivision(spec, samples=args.samples, seed=args.seed)
    out = {
        "spec": spec.to_json(),
        "ray": list(spec.ray),
        "maximal_cones": _cones(fan),
        "all_charts_smooth": all(cone_index(c) == 1 for c in fan.maximal_cones()),
        "refinement": subdivision_report(spec, samples=args.samples, seed=args.seed).to_json(),
        "exceptional_fiber": exceptional_fiber(spec).to_json(),
    }
    if args.v is not None:
        if len(args.v) != spec.n:
            raise LatticeError(f"--v needs {spec.n} entries")
        out["chart_weights"] = [chart_weights(fan, args.v, c).to_json()
                                for c in sorted(fan.maximal_cones(), key=lambda c: c.generators)]
    return out


def _action_report(report: act.FixedComponentReport, picard: bool) -> dict:
    verdict = act.classify_psi(report, picard_rank_one=picard)
    graph = act.order_graph(report)
    return {"report": report.to_json(), "order_graph": graph.to_json(), "verdict": verdict.to_json()}


def run_analyze(args) -> dict:
    try:
        with open(args.file, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise act.ActionError(f"cannot read action file: {e}")
    variety = data.get("variety", "pn")
    a = act.DiagonalAction(tuple(data["weights"]), int(data.get("linearization_offset", 0)))
    q = None
    if data.get("quadric") is not None:
        q = act.PairingQuadric(tuple(tuple(p) for p in data["quadric"].get("pairs", [])),
                               tuple(data["quadric"].get("squares", [])))
    return _action_report(act.analyze(variety, a, q), args.picard_rank_one)


def run_example_quadric(args) -> dict:
    a, q = act.quadric_example(args.n, args.k)
    return {"example": {"variety": "quadric", "n": args.n, "k": args.k},
            **_action_report(act.analyze_quadric(a, q), True)}


def run_example_og(args) -> dict:
    if args.n < 3:
        raise act.ActionError("example-og needs n >= 3")
    a, q = act.og_example(args.n)
    return {"example": {"variety": "og2", "n": args.n},
            **_action_report(act.analyze_og(a, q), True)}


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="toricflips", description="Toric flips, bordisms and C*-action weights.")
    p.add_argument("--format", choices=("text", "json"), default="text")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)

    def sampling(sp):
        sp.add_argument("--samples", type=int, default=200, help="random points for the cover check")
        sp.add_argument("--seed", type=int, default=0)

    for name, fn in (("cobordism", run_cobordism), ("bordism", run_bordism)):
        sp = sub.add_parser(name)
        sp.add_argument("--q-neg", type=_int_list, required=True)
        sp.add_argument("--zeros", type=int, default=0)
        sp.add_argument("--q-pos", type=_int_list, required=True)
        sp.add_argument("--unchecked", action="store_true", help="allow d1 = 1")
        sampling(sp)
        common(sp)
        sp.set_defaults(func=fn)

    sp = sub.add_parser("blowup")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--omega", type=_int_list, required=True, help="the nonzero weights q_{d+1},...,q_n")
    sp.add_argument("--legacy", action="store_true", help="allow d = 0, 1")
    sp.add_argument("--v", type=_int_list, default=None, help="report chart weights of this vector (write --v=-2,1 for negatives)")
    sampling(sp)
    common(sp)
    sp.set_defaults(func=run_blowup)

    sp = sub.add_parser("analyze")
    sp.add_argument("file", help="action description JSON")
    sp.add_argument("--picard-rank-one", action="store_true")
    common(sp)
    sp.set_defaults(func=run_analyze)

    sp = sub.add_parser("example-quadric")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    common(sp)
    sp.set_defaults(func=run_example_quadric)

    sp = sub.add_parser("example-og")
    sp.add_argument("--n", type=int, required=True)
    common(sp)
    sp.set_defaults(func=run_example_og)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = args.func(args)
    except AssertionError as e:
        print(f"internal verification failed: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    except (ValueError, KeyError, TypeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PRECONDITION
    emit(report, args.format)
    return EXIT_OK


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
