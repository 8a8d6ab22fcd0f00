"""Command-line front end: generate, construct, verify, report.

Exit codes: 0 all checks pass, 1 a verdict or invariant failed, 2 usage or
parse errors.  Reports are deterministic for a fixed command line and seed;
``--json-report`` writes a structured mirror of the textual report.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .complexes import (ChainMap, CurvatureError, SampleError, SupportLocus,
                        cone, curvature_check, is_chain_map, is_homotopy,
                        strict_exactness_sample)
from .constructions import (InvariantError, LambdaFamily, RamondData, TauData,
                            TwistFamily, cone_lift, lemma1_build, lemma2_build,
                            remark_decompose, s_lambda_check, s_xi_reduce)
from .kcert import verify as kcert_verify
from .polynomials import ParseError
from .scalars import FieldError, ScalarField, cyclotomic_field
from .serialize import (ConeLiftInstance, FileFormatError, LambdaInstance,
                        MfInstance, RemarkInstance, TwistInstance,
                        parse_bundle, parse_instance, write_bundle,
                        write_instance)
from .supermod import EVEN, ParityMap, ShapeError

PASS, FAIL, USAGE = 0, 1, 2


class Report:
    """Accumulates check lines and their JSON mirror."""

    def __init__(self, command: str, config: dict):
        self.command = command
        self.config = config
        self.checks: list[dict] = []
        self.extra: dict = {}

    def add(self, name: str, ok: bool, detail: str = ""):
        self.checks.append({"name": name, "ok": bool(ok), "detail": detail})

    @property
    def ok(self) -> bool:
        return all(c["ok"] for c in self.checks)

    def render(self) -> str:
        lines = [f"command: {self.command}"]
        for key, value in self.config.items():
            lines.append(f"{key}: {value}")
        for c in self.checks:
            status = "pass" if c["ok"] else "FAIL"
            detail = f" ({c['detail']})" if c["detail"] else ""
            lines.append(f"check {c['name']}: {status}{detail}")
        for key, value in self.extra.items():
            lines.append(f"{key}: {value}")
        lines.append(f"result: {'PASS' if self.ok else 'FAIL'}")
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {"command": self.command, "config": self.config,
                "checks": self.checks, **self.extra, "ok": self.ok}


def _parse_field_flag(spec: str) -> ScalarField:
    if spec in ("Q", "rationals"):
        return cyclotomic_field(1)
    if spec.startswith("cyclotomic:"):
        return cyclotomic_field(int(spec.split(":", 1)[1]))
    raise argparse.ArgumentTypeError(
        f"bad field {spec!r}; expected Q or cyclotomic:<r>")


def _zlocus(instance_ring, text: str | None) -> SupportLocus:
    if not text:
        return SupportLocus()
    gens = tuple(instance_ring.parse(chunk) for chunk in text.split(","))
    return SupportLocus(gens)


def _load(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FileFormatError(f"cannot read {path}: {exc}") from None
    return parse_instance(text)


def _emit(report: Report, args) -> int:
    print(report.render())
    if getattr(args, "json_report", None):
        Path(args.json_report).write_text(
            json.dumps(report.to_json(), indent=2, sort_keys=True) + "\n")
    return PASS if report.ok else FAIL


def _write_bundle(cert, args, report: Report):
    if getattr(args, "out", None):
        Path(args.out).write_text(write_bundle(cert))
        report.extra["bundle"] = args.out


def _verdict_checks(report: Report, verdicts: dict):
    for name, v in verdicts.items():
        report.add(name, bool(v), "" if v else v.describe())


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_gen(args) -> int:
    from . import generators
    builders = {
        "lambda-family": lambda: generators.gen_lambda_family(
            args.r, args.size, args.seed, args.field),
        "twist-family": lambda: generators.gen_twist_family(
            args.r, args.size, args.seed, args.field),
        "tau-data": lambda: generators.gen_tau_data(
            args.r, args.size, args.seed, args.field),
        "ramond-data": lambda: generators.gen_ramond_data(
            args.r, args.size, args.seed, args.field),
        "remark-family": lambda: generators.gen_remark_family(
            args.size, args.seed, args.field),
        "cone-lift": lambda: generators.gen_cone_lift(
            args.size, args.seed, args.field),
    }
    if args.kind not in builders:
        print(f"unknown kind {args.kind!r}", file=sys.stderr)
        return USAGE
    if args.size > 8:
        print("size is limited to 8", file=sys.stderr)
        return USAGE
    instance = builders[args.kind]()
    text = write_instance(instance)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return PASS


def cmd_check_mf(args) -> int:
    instance = _load(args.input)
    report = Report("check-mf", {"input": args.input})
    if isinstance(instance, (MfInstance, TwistInstance)):
        module, d = instance.module, instance.d
    elif isinstance(instance, (LambdaInstance, RemarkInstance)):
        module, d = instance.module, instance.d_lambda
    else:
        raise FileFormatError("check-mf needs an instance with a module and a map")
    try:
        c = curvature_check(module, d)
        report.add("square-is-scalar", True)
        report.extra["curvature"] = str(c.curvature)
    except CurvatureError as exc:
        report.add("square-is-scalar", False,
                   f"{exc} " + (f"entry {exc.entry}" if exc.entry else ""))
    return _emit(report, args)


def cmd_lemma1(args) -> int:
    instance = _load(args.input)
    if not isinstance(instance, LambdaInstance):
        raise FileFormatError("lemma1 needs a lambda-family instance")
    report = Report("lemma1", {"input": args.input, "r": instance.r})
    try:
        family = LambdaFamily.from_map(instance.module, instance.d_lambda, instance.r)
    except InvariantError as exc:
        report.add("family-invariant", False, str(exc))
        return _emit(report, args)
    report.add("family-invariant", True)
    result = lemma1_build(family, _zlocus(instance.module.ring, args.zgens))
    _verdict_checks(report, result.verdicts)
    _write_bundle(result.certificate, args, report)
    return _emit(report, args)


def cmd_lemma2(args) -> int:
    instance = _load(args.input)
    if not isinstance(instance, TwistInstance):
        raise FileFormatError("lemma2 needs a twist-family instance")
    report = Report("lemma2", {"input": args.input, "r": len(instance.functions)})
    try:
        family = TwistFamily(instance.module, instance.d, instance.functions)
    except InvariantError as exc:
        report.add("family-invariant", False, str(exc))
        return _emit(report, args)
    report.add("family-invariant", True)
    result = lemma2_build(family, _zlocus(instance.module.ring, args.zgens))
    _verdict_checks(report, result.verdicts)
    replay = kcert_verify(result.certificate)
    report.add("certificate-replay", bool(replay))
    _write_bundle(result.certificate, args, report)
    return _emit(report, args)


def cmd_remark(args) -> int:
    instance = _load(args.input)
    if not isinstance(instance, RemarkInstance):
        raise FileFormatError("remark needs a remark-family instance")
    report = Report("remark", {"input": args.input,
                               "target": str(instance.target)})
    try:
        result = remark_decompose(instance.module, instance.d_lambda,
                                  instance.target, list(instance.roots),
                                  _zlocus(instance.module.ring, args.zgens))
    except InvariantError as exc:
        report.add("family-invariant", False, str(exc))
        return _emit(report, args)
    _verdict_checks(report, result.verdicts)
    replay = kcert_verify(result.certificate)
    report.add("certificate-replay", bool(replay))
    _write_bundle(result.certificate, args, report)
    return _emit(report, args)


def cmd_slambda(args) -> int:
    instance = _load(args.input)
    if not isinstance(instance, TauData):
        raise FileFormatError("slambda needs a tau-data instance")
    report = Report("slambda", {"input": args.input, "r": instance.r})
    zc = instance.check()
    report.add("zero-composition", bool(zc), "" if zc else zc.describe())
    result = s_lambda_check(instance)
    report.add("square-is-lambda^r", bool(result.verdict),
               "" if result.verdict else result.verdict.describe())
    if result.family is not None:
        chained = lemma1_build(result.family)
        report.add("induced-family-chain", chained.ok)
        _write_bundle(chained.certificate, args, report)
    return _emit(report, args)


def cmd_sxi(args) -> int:
    instance = _load(args.input)
    if not isinstance(instance, RamondData):
        raise FileFormatError("sxi needs a ramond-data instance")
    report = Report("sxi", {"input": args.input, "r": instance.r})
    inv = instance.check()
    report.add("twist-isotropy", bool(inv), "" if inv else inv.describe())
    if not inv:
        return _emit(report, args)
    result = s_xi_reduce(instance, _zlocus(instance.ring, args.zgens))
    for v in result.coupling_checks:
        report.add(v.kind, bool(v), "" if v else v.describe())
    report.add(result.product_check.kind, bool(result.product_check))
    for v in result.matches:
        report.add(v.kind, bool(v), "" if v else v.describe())
    _verdict_checks(report, result.lemma2.verdicts)
    replay = kcert_verify(result.certificate)
    report.add("certificate-replay", bool(replay))
    _write_bundle(result.certificate, args, report)
    return _emit(report, args)


def cmd_conelift(args) -> int:
    instance = _load(args.input)
    if not isinstance(instance, ConeLiftInstance):
        raise FileFormatError("conelift needs a cone-lift instance")
    report = Report("conelift", {"input": args.input})
    g = ChainMap(instance.a, instance.b, instance.g)
    f = ChainMap(instance.b, instance.c, instance.f)
    for name, cm in (("g-chain-map", g), ("f-chain-map", f)):
        v = is_chain_map(cm)
        report.add(name, bool(v), "" if v else v.describe())
    fg = instance.f.compose(instance.g)
    zero = ParityMap.zero(instance.a.module, instance.c.module, EVEN)
    witness = is_homotopy(instance.a, instance.c, instance.h, fg, zero)
    report.add("homotopy-witness", bool(witness),
               "" if witness else witness.describe())
    if report.ok:
        lifted = cone_lift(g, f, instance.h)
        cn = cone(g)
        restriction = lifted.map.compose(cn.inclusion.map)
        report.add("restriction-equals-f", restriction == instance.f)
    return _emit(report, args)


def cmd_verify(args) -> int:
    try:
        text = Path(args.input).read_text()
    except OSError as exc:
        raise FileFormatError(f"cannot read {args.input}: {exc}") from None
    cert = parse_bundle(text)
    verdict = kcert_verify(cert)
    report = Report("verify", {"input": args.input})
    for idx, v in verdict.move_results:
        report.add(f"move-{idx}", bool(v), "" if v else v.describe())
    report.add("ledger", verdict.ledger_ok, verdict.message)
    if verdict.assumed_exact:
        report.extra["assumed-exact"] = ", ".join(verdict.assumed_exact)
    return _emit(report, args)


def cmd_exactness(args) -> int:
    instance = _load(args.input)
    if isinstance(instance, (MfInstance, TwistInstance)):
        module, d = instance.module, instance.d
    else:
        raise FileFormatError("exactness needs an mf or twist-family instance")
    complex_ = curvature_check(module, d)
    report = Report("exactness", {"input": args.input, "seed": args.seed,
                                  "trials": args.trials})
    z = _zlocus(module.ring, args.zgens)
    try:
        sample = strict_exactness_sample(complex_, z, args.trials, args.seed)
        report.add("fiberwise-exactness", sample.ok, sample.message)
        report.extra["points"] = len(sample.points)
    except SampleError as exc:
        report.add("fiberwise-exactness", False, str(exc))
    return _emit(report, args)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mfcert",
        description="exact certificates for graded factorization identities")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, bundle_out=True):
        p.add_argument("input")
        p.add_argument("--json-report", help="write a JSON mirror of the report")
        p.add_argument("--zgens", help="comma-separated locus generators")
        if bundle_out:
            p.add_argument("--out", help="write the certificate bundle here")

    p = sub.add_parser("gen", help="generate a seeded instance file")
    p.add_argument("--kind", required=True)
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--size", type=int, default=2)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--field", type=_parse_field_flag, default=None)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("check-mf", help="verify the square of a map is scalar")
    common(p, bundle_out=False)
    p.set_defaults(func=cmd_check_mf)

    for name, func in (("lemma1", cmd_lemma1), ("lemma2", cmd_lemma2),
                       ("remark", cmd_remark), ("slambda", cmd_slambda),
                       ("sxi", cmd_sxi)):
        p = sub.add_parser(name)
        common(p)
        p.set_defaults(func=func)

    p = sub.add_parser("conelift", help="lift a map through a mapping cone")
    common(p, bundle_out=False)
    p.set_defaults(func=cmd_conelift)

    p = sub.add_parser("verify", help="replay a certificate bundle")
    p.add_argument("input")
    p.add_argument("--json-report")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("exactness", help="sample fiberwise exactness off a locus")
    common(p, bundle_out=False)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=1)
    p.set_defaults(func=cmd_exactness)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (FileFormatError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except (InvariantError, CurvatureError, ShapeError, FieldError,
            SampleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return FAIL


if __name__ == "__main__":
    sys.exit(main())
