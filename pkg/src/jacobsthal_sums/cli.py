"""Command-line driver: ``jacobsthal-sums <subcommand> ...``.

Exit status: 0 on success, 2 when a pipeline or verification finds an
unexplained disagreement with the reference tables, 1 on usage or
operational errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, fields
from typing import Optional, Sequence

from . import seqcore
from .certified import CertifiedReal
from .cfrac import (DEFAULT_BITS, convergents, expand, mu_descriptor, parse_descriptor,
                    tau_descriptor)
from .dpreduce import DEFAULT_HORIZON, ReductionInstance, reduce_family, reduce_once
from .matveev import derive_absolute_bound
from .problems import Problem
from .realctx import make_context
from .solver import (Certificate, PipelineError, SolutionTriple, reduction_constant,
                     run_pipeline, search_power_of_two, search_sums, verify_triple)

CONFIG_ENV = "JACOBSTHAL_SUMS_CONFIG"
FORMATS = ("text", "json", "csv")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    precision_bits: int = 256
    cfrac_precision_bits: int = DEFAULT_BITS
    convergent_horizon: int = DEFAULT_HORIZON
    output_format: str = "text"
    problem: Optional[str] = None
    workers: int = 1

    def __post_init__(self):
        if self.precision_bits < 64:
            raise UsageError("precision_bits must be at least 64")
        if self.cfrac_precision_bits < 64:
            raise UsageError("cfrac_precision_bits must be at least 64")
        if self.convergent_horizon < 1:
            raise UsageError("convergent_horizon must be at least 1")
        if self.output_format not in FORMATS:
            raise UsageError(f"output_format must be one of {', '.join(FORMATS)}")
        if self.workers < 1:
            raise UsageError("workers must be at least 1")


def load_config(path: Optional[str], overrides: dict) -> RunConfig:
    """Defaults, then the JSON config file, then explicit flags."""
    values: dict = {}
    path = path or os.environ.get(CONFIG_ENV)
    if path:
        try:
            with open(path, encoding="utf-8") as fh:
                values = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {path}: {exc}") from None
        if not isinstance(values, dict):
            raise UsageError("config file must hold a JSON object")
        known = {f.name for f in fields(RunConfig)}
        unknown = sorted(set(values) - known)
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(unknown)}")
    values.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return RunConfig(**values)
    except TypeError as exc:
        raise UsageError(str(exc)) from None


# -- serialization -----------------------------------------------------------------


def _real(x: CertifiedReal, digits: int = 40) -> dict:
    mid, rad = x.decimal_enclosure(digits)
    return {"mid": mid, "rad": rad}


def certificate_to_dict(cert: Certificate) -> dict:
    ab = cert.absolute_bound
    r1 = cert.round1
    legendre = None
    if cert.legendre is not None:
        lg = cert.legendre
        legendre = {
            "b_max": lg.b_max,
            "m_bound": lg.m_max,
            "M": lg.M,
            "convergent_bracket": [lg.index_low, lg.index_high],
            "quotient_window": lg.window,
            "valid_from_m": lg.valid_from,
            "power_solutions": [list(p) for p in cert.power_solutions or ()],
        }
    per_t = []
    for t, r in cert.round2.per_t:
        per_t.append({
            "t": t,
            "q_index": r.convergent_used.index,
            "epsilon": _real(r.epsilon, 12),
            "bound": r.omega_bound,
            "status": r.status.value,
        })
    return {
        "problem": cert.problem.value,
        "absolute_bound": {
            "constant_lambda1": _real(ab.c_lambda1),
            "constant_lambda2": _real(ab.c_lambda2),
            "n_bound": ab.absolute_n_bound,
            "lambda2_slope": _real(ab.lambda2_slope),
            "final_c1": _real(ab.c1),
            "final_c2": _real(ab.c2),
            "final_c3": _real(ab.c3),
            "trace": list(ab.inequality_trace),
        },
        "round1": {
            "q": r1.convergent_used.q,
            "epsilon": _real(r1.epsilon),
            "bound": r1.omega_bound,
            "q_index": r1.convergent_used.index,
            "A": cert.round1_A,
            "M": cert.round1_M,
        },
        "round2": {
            "per_t": per_t,
            "bound": cert.round2.max_ok_bound,
            "failed_t": list(cert.round2.failed_t),
            "A": cert.round2_A,
        },
        "legendre": legendre,
        "search_range": {
            "k_max": cert.search_range.k_max,
            "n_max": cert.search_range.n_max,
            "m_max": cert.search_range.m_max,
        },
        "solutions": [list(s) for s in cert.solutions],
        "paper_table_diff": [
            {"triple": list(d.triple), "kind": d.kind, "detail": d.detail,
             "nearby": [list(t) for t in d.nearby]}
            for d in cert.paper_table_diff
        ],
        "notes": list(cert.notes),
    }


def _json_bytes(obj) -> bytes:
    return (json.dumps(obj, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def _csv_bytes(header: Sequence[str], rows) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue().encode("utf-8")


def emit_certificate(cert: Certificate, fmt: str = "json") -> bytes:
    if fmt == "json":
        return _json_bytes(certificate_to_dict(cert))
    if fmt == "csv":
        return _csv_bytes(("k", "n", "m"), cert.solutions)
    d = certificate_to_dict(cert)
    lines = [f"problem: {d['problem']}"]
    ab = d["absolute_bound"]
    lines.append(f"lambda1 constant: {ab['constant_lambda1']['mid']}")
    lines.append(f"n bound: {ab['n_bound']}")
    r1 = d["round1"]
    lines.append(f"round 1: q_{r1['q_index']}, epsilon {r1['epsilon']['mid'][:10]}, "
                 f"n - m <= {r1['bound']}")
    r2 = d["round2"]
    lines.append(f"round 2: m <= {r2['bound']}, failed t = {r2['failed_t']}")
    if d["legendre"]:
        lg = d["legendre"]
        lines.append(f"legendre: b_max {lg['b_max']}, m <= {lg['m_bound']}, "
                     f"R_k = 2^m at {lg['power_solutions']}")
    sr = d["search_range"]
    lines.append(f"search: k <= {sr['k_max']}, m <= n <= {sr['n_max']}")
    lines.append(f"solutions ({len(cert.solutions)}): "
                 + " ".join(str(s) for s in cert.solutions))
    for item in d["paper_table_diff"]:
        extra = f" nearby {item['nearby']}" if item["nearby"] else ""
        lines.append(f"diff {item['kind']}: {tuple(item['triple'])} {item['detail']}{extra}")
    lines.extend(f"note: {n}" for n in d["notes"])
    return ("\n".join(lines) + "\n").encode("utf-8")


# -- subcommands --------------------------------------------------------------------


def _write(data: bytes, out=None) -> None:
    out = out or sys.stdout
    out.write(data.decode("utf-8"))
    out.flush()


def _cmd_seq(args, cfg: RunConfig) -> int:
    tab = seqcore.table(args.kind, args.max_index)
    if cfg.output_format == "json":
        _write(_json_bytes(list(tab.terms)))
    elif args.format is None or cfg.output_format == "csv":
        for i, v in enumerate(tab.terms):
            print(f"{i},{v}")
    else:
        for v in tab.terms:
            print(v)
    return 0


def _cmd_ctx(args, cfg: RunConfig) -> int:
    ctx = make_context(args.bits or cfg.precision_bits)
    values = {"alpha": ctx.alpha, "a": ctx.a, "tau": ctx.tau}
    if cfg.output_format == "json":
        _write(_json_bytes({k: dict(_real(v, args.digits), digits=v.certified_digits())
                            for k, v in values.items()}))
    else:
        for name, v in values.items():
            digits = v.certified_digits()
            print(f"{name} = {v.to_decimal(min(args.digits, digits))} ({digits} digits)")
    return 0


def _cmd_cfrac(args, cfg: RunConfig) -> int:
    if args.value and args.tau_value and args.value != args.tau_value:
        raise UsageError("give the value either positionally or with --tau")
    desc = parse_descriptor(args.tau_value or args.value or "tau")
    cf = expand(desc, args.count, precision_bits=cfg.cfrac_precision_bits)
    convs = convergents(cf)[: args.count]
    quotients = list(cf.partial_quotients[: args.count])
    if cfg.output_format == "json":
        _write(_json_bytes({"value": desc.name, "partial_quotients": quotients,
                            "convergents": [[c.p, c.q] for c in convs]}))
    elif cfg.output_format == "csv":
        _write(_csv_bytes(("index", "a", "p", "q"),
                          [(c.index, a, c.p, c.q) for c, a in zip(convs, quotients)]))
    else:
        print(f"{desc.name} = [{quotients[0]}; {', '.join(map(str, quotients[1:]))}]")
        for c in convs:
            print(f"{c.index}: {c.p}/{c.q}")
    return 0


def _problem(args, cfg: RunConfig) -> Problem:
    name = getattr(args, "problem", None) or cfg.problem
    if name is None:
        raise UsageError("--problem is required")
    return Problem.parse(name)


def _cmd_bound(args, cfg: RunConfig) -> int:
    problem = _problem(args, cfg)
    b = derive_absolute_bound(problem, make_context(cfg.precision_bits))
    if cfg.output_format == "json":
        _write(_json_bytes({"problem": problem.value,
                            "constant_lambda1": _real(b.c_lambda1),
                            "constant_lambda2": _real(b.c_lambda2),
                            "n_bound": b.absolute_n_bound,
                            "trace": list(b.inequality_trace)}))
    else:
        print("\n".join(b.inequality_trace))
    return 0


def _cmd_reduce(args, cfg: RunConfig) -> int:
    problem = _problem(args, cfg)
    data = problem.data
    ctx = make_context(cfg.cfrac_precision_bits)
    M = args.M if args.M is not None else data.published.M
    tau = tau_descriptor()
    cf = expand(tau, 128, precision_bits=cfg.cfrac_precision_bits)
    if args.round == 1:
        A = args.A or reduction_constant(data.residual1, ctx)
        r = reduce_once(ReductionInstance(tau, mu_descriptor(data.coefficient), A, 2, M), cf,
                        horizon=cfg.convergent_horizon, bits=cfg.cfrac_precision_bits)
        record = {"q_index": r.convergent_used.index, "q": r.convergent_used.q,
                  "epsilon": _real(r.epsilon), "bound": r.omega_bound,
                  "status": r.status.value}
    else:
        A = args.A or reduction_constant(data.residual2, ctx)
        t_max = args.t_max or data.published.round1_bound
        fam = reduce_family(problem, t_max, A, 2, M, cf, horizon=cfg.convergent_horizon,
                            bits=cfg.cfrac_precision_bits)
        record = {"bound": fam.max_ok_bound, "failed_t": list(fam.failed_t), "t_max": t_max}
    record = {"problem": problem.value, "round": args.round, "A": A, "M": M, **record}
    if cfg.output_format == "json":
        _write(_json_bytes(record))
    else:
        for k, v in record.items():
            print(f"{k}: {v['mid'] if isinstance(v, dict) else v}")
    return 0


def _cmd_search(args, cfg: RunConfig) -> int:
    if args.power_of_two is not None:
        rows = search_power_of_two(args.power_of_two)
        header = ("k", "m")
    else:
        problem = _problem(args, cfg)
        rows = search_sums(problem, args.k_max, args.n_max, workers=cfg.workers)
        header = ("k", "n", "m")
    if cfg.output_format == "json":
        _write(_json_bytes([list(r) for r in rows]))
    elif cfg.output_format == "csv":
        _write(_csv_bytes(header, rows))
    else:
        for r in rows:
            print("(" + ",".join(map(str, r)) + ")")
    return 0


def _cmd_pipeline(args, cfg: RunConfig) -> int:
    problem = _problem(args, cfg)
    try:
        cert = run_pipeline(problem, precision_bits=cfg.precision_bits,
                            cfrac_bits=cfg.cfrac_precision_bits,
                            horizon=cfg.convergent_horizon, workers=cfg.workers)
    except PipelineError as exc:
        print(f"error: pipeline stopped at {exc}", file=sys.stderr)
        for line in exc.trace:
            print(f"  {line}", file=sys.stderr)
        return 1
    data = emit_certificate(cert, cfg.output_format)
    if args.output:
        with open(args.output, "wb") as fh:
            fh.write(data)
    else:
        _write(data)
    return 2 if cert.unexplained else 0


def _parse_triple(text: str) -> SolutionTriple:
    try:
        parts = [int(p) for p in text.replace("(", "").replace(")", "").split(",")]
    except ValueError:
        raise UsageError(f"bad triple {text!r}") from None
    if len(parts) != 3:
        raise UsageError("a triple needs exactly three integers k,n,m")
    return SolutionTriple(*parts)


def _cmd_verify(args, cfg: RunConfig) -> int:
    problem = _problem(args, cfg)
    t = _parse_triple(args.triple)
    ok = verify_triple(problem, t)
    if min(t) < 0:
        print(f"{t}: negative index, equation fails")
        return 2
    J = seqcore.SequenceKind.JACOBSTHAL
    lhs = seqcore.term(problem.data.kind, t.k)
    jn, jm = seqcore.term(J, t.n), seqcore.term(J, t.m)
    relation = "==" if ok else "!="
    verdict = "equation holds" if ok else "equation fails"
    print(f"{problem.value} {t}: {lhs} {relation} {jn} + {jm}; {verdict}")
    return 0 if ok else 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="JSON config file (default: $%s)" % CONFIG_ENV)
    common.add_argument("--precision-bits", type=int, dest="precision_bits")
    common.add_argument("--cfrac-bits", type=int, dest="cfrac_precision_bits")
    common.add_argument("--horizon", type=int, dest="convergent_horizon")
    common.add_argument("--format", choices=FORMATS, dest="format")
    common.add_argument("--json", action="store_const", const="json", dest="format",
                        help="same as --format json")
    common.add_argument("--workers", type=int)

    parser = _Parser(prog="jacobsthal-sums",
                     description="Padovan and Perrin numbers as sums of two Jacobsthal numbers")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("seq", parents=[common], help="print sequence terms")
    p.add_argument("kind", choices=[k.value for k in seqcore.SequenceKind])
    p.add_argument("max_index", type=int)
    p.set_defaults(func=_cmd_seq)

    p = sub.add_parser("ctx", parents=[common], help="print the certified root system")
    p.add_argument("--bits", type=int)
    p.add_argument("--digits", type=int, default=50)
    p.set_defaults(func=_cmd_ctx)

    p = sub.add_parser("cfrac", parents=[common], help="continued fraction of a real")
    p.add_argument("value", nargs="?", help="tau, mu:padovan[:t], mu:perrin[:t] or p/q")
    p.add_argument("--tau", dest="tau_value", metavar="DESCRIPTOR",
                   help="same as the positional value")
    p.add_argument("--count", type=int, default=20)
    p.set_defaults(func=_cmd_cfrac)

    problem_choices = [p.value for p in Problem]
    for name, func, text in (("bound", _cmd_bound, "absolute bound on n"),
                             ("reduce", _cmd_reduce, "one reduction round"),
                             ("search", _cmd_search, "brute-force search"),
                             ("pipeline", _cmd_pipeline, "full proof pipeline"),
                             ("verify", _cmd_verify, "check one triple")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--problem", choices=problem_choices)
        p.set_defaults(func=func)
        if name == "reduce":
            p.add_argument("--round", type=int, choices=(1, 2), default=1)
            p.add_argument("--M", type=int)
            p.add_argument("--A", type=int)
            p.add_argument("--t-max", type=int, dest="t_max")
        elif name == "search":
            p.add_argument("--k-max", type=int, default=850, dest="k_max")
            p.add_argument("--n-max", type=int, default=300, dest="n_max")
            p.add_argument("--power-of-two", type=int, metavar="M_MAX", dest="power_of_two")
        elif name == "pipeline":
            p.add_argument("--output", "-o")
        elif name == "verify":
            p.add_argument("--triple", required=True, help="k,n,m")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = load_config(args.config, {
            "precision_bits": args.precision_bits,
            "cfrac_precision_bits": args.cfrac_precision_bits,
            "convergent_horizon": args.convergent_horizon,
            "output_format": args.format,
            "problem": getattr(args, "problem", None),
            "workers": args.workers,
        })
        return args.func(args, cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, ArithmeticError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
