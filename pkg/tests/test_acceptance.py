"""Acceptance gate: one check per criterion, each printing a PASS/FAIL line.

Run standalone with ``python tests/test_acceptance.py`` or through pytest,
which also lists the lines in its terminal summary.
"""
from __future__ import annotations

import contextlib
import io
import json
import subprocess
import sys
import time
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

from jacobsthal_sums import seqcore  # noqa: E402
from jacobsthal_sums.cfrac import convergents, expand, tau_descriptor  # noqa: E402
from jacobsthal_sums.cli import main  # noqa: E402
from jacobsthal_sums.matveev import derive_absolute_bound  # noqa: E402
from jacobsthal_sums.problems import PADOVAN_TABLE, PERRIN_TABLE  # noqa: E402
from jacobsthal_sums.realctx import binet_padovan, make_context  # noqa: E402
from jacobsthal_sums.seqcore import SequenceKind as K  # noqa: E402
from jacobsthal_sums.solver import search_sums, verify_triple  # noqa: E402

from conftest import ACCEPTANCE_LINES, naive_solutions, plain_terms  # noqa: E402


@lru_cache(maxsize=None)
def pipeline_json(problem: str, *extra: str) -> tuple[int, str]:
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(["pipeline", "--problem", problem, "--json", *extra])
    return code, buf.getvalue()


def certificate(problem: str, *extra: str) -> dict:
    return json.loads(pipeline_json(problem, *extra)[1])


def positive(enclosure: dict) -> bool:
    return Fraction(enclosure["mid"]) - Fraction(enclosure["rad"]) > 0


def upper(enclosure: dict) -> Fraction:
    return Fraction(enclosure["mid"]) + Fraction(enclosure["rad"])


def report(number, passed: bool, detail: str) -> bool:
    line = f"{'PASS' if passed else 'FAIL'} criterion {number}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return passed


def criterion_1() -> bool:
    t0 = time.perf_counter()
    search_sums("padovan", 850, 300)
    elapsed = time.perf_counter() - t0
    code, _ = pipeline_json("padovan")
    cert = certificate("padovan")
    found = [tuple(s) for s in cert["solutions"]]
    expected = sorted(PADOVAN_TABLE)
    extra = [tuple(d["triple"]) for d in cert["paper_table_diff"]]
    ok = found == expected and not cert["paper_table_diff"] and elapsed < 10 and code == 0
    return report(1, ok, f"{len(found)} triples (want exactly {len(expected)}), "
                         f"diff {len(extra)} entries {extra}, exit {code}, "
                         f"search k<=850 n<=300 in {elapsed:.2f}s")


def criterion_2() -> bool:
    cert = certificate("perrin")
    verified = sum(verify_triple("perrin", t) for t in PERRIN_TABLE)
    failed = {tuple(d["triple"]): [tuple(t) for t in d["nearby"]]
              for d in cert["paper_table_diff"] if d["kind"] == "failed"}
    ok = verified == 13 and failed == {(0, 3, 1): [(0, 3, 0)], (3, 3, 1): [(3, 3, 0)]}
    return report(2, ok, f"{verified}/15 listed triples verified, failing {failed}")


def criterion_3() -> bool:
    pad, per = derive_absolute_bound("padovan"), derive_absolute_bound("perrin")
    checks = {
        "padovan n": pad.absolute_n_bound <= 2 * 10 ** 31,
        "perrin n": per.absolute_n_bound <= 3 * 10 ** 29,
        "padovan c": bool(pad.c_lambda1.le(4 * 10 ** 14)),
        "perrin c": bool(per.c_lambda1.le(6 * 10 ** 12)),
    }
    return report(3, all(checks.values()),
                  f"n <= {pad.absolute_n_bound:.3e} / {per.absolute_n_bound:.3e}, "
                  f"c = {float(pad.c_lambda1):.4e} / {float(per.c_lambda1):.4e}")


def criterion_4() -> bool:
    pad, per = certificate("padovan")["round1"], certificate("perrin")["round1"]
    ok = (pad["bound"] <= 137 and per["bound"] <= 142
          and positive(pad["epsilon"]) and positive(per["epsilon"]))
    return report(4, ok, f"n-m <= {pad['bound']} (eps {pad['epsilon']['mid'][:8]}) / "
                         f"{per['bound']} (eps {per['epsilon']['mid'][:8]})")


def criterion_5() -> bool:
    pad, per = certificate("padovan"), certificate("perrin")
    per_t1 = next(r for r in per["round2"]["per_t"] if r["t"] == 1)
    lg = per["legendre"]
    terms = plain_terms("perrin", 1000)
    oracle = sorted((k, v.bit_length() - 1) for k, v in enumerate(terms)
                    if 2 <= v <= 2 ** lg["m_bound"] and v & (v - 1) == 0)
    powers = sorted(tuple(p) for p in lg["power_solutions"])
    ok = (pad["round2"]["bound"] <= 140 and per["round2"]["bound"] <= 145
          and per["round2"]["failed_t"] == [1] and per_t1["status"] == "epsilon_nonpositive"
          and lg["m_bound"] <= 109 and powers == oracle == [(2, 1), (4, 1)])
    return report(5, ok, f"m <= {pad['round2']['bound']} / {per['round2']['bound']}, "
                         f"failed t {per['round2']['failed_t']}, legendre m <= "
                         f"{lg['m_bound']}, R_k = 2^m at {powers}")


def _same_up_to_enclosure(a, b) -> bool:
    if isinstance(a, dict) and set(a) == {"mid", "rad"}:
        lo_a, hi_a = Fraction(a["mid"]) - Fraction(a["rad"]), upper(a)
        lo_b, hi_b = Fraction(b["mid"]) - Fraction(b["rad"]), upper(b)
        return not (hi_a < lo_b or hi_b < lo_a)
    if isinstance(a, dict):
        return list(a) == list(b) and all(_same_up_to_enclosure(a[k], b[k]) for k in a)
    if isinstance(a, list):
        return len(a) == len(b) and all(_same_up_to_enclosure(x, y) for x, y in zip(a, b))
    return a == b


def criterion_6() -> bool:
    t0 = time.perf_counter()
    sub = {}

    ctx = make_context(600)
    sub["binet residual k<=500"] = all(binet_padovan(ctx, k) is not None for k in range(1, 501))

    growth_bad = {}
    for kind in K:
        start = seqcore.GROWTH_START[kind]
        bad = [i for i, ok in seqcore.check_growth(kind, range(start, 1001)) if not ok]
        if bad:
            growth_bad[kind.value] = bad
    sub["growth envelopes to 1000"] = not growth_bad

    sub["3 J_n = 2^n - (-1)^n, n<=5000"] = all(
        3 * seqcore.term(K.JACOBSTHAL, n) == 2 ** n - (-1) ** n for n in range(5001))

    cf = expand(tau_descriptor(), 90)
    convs = convergents(cf)[:90]
    tau = tau_descriptor()(8192)
    sub["cf determinant and Legendre law, 90 convergents"] = len(convs) == 90 and all(
        c.p * p.q - p.p * c.q == (-1) ** (c.index - 1) for p, c in zip(convs, convs[1:])
    ) and all(abs(tau - Fraction(c.p, c.q)).lt(Fraction(1, c.q ** 2)) for c in convs)

    sub["search oracle k<=60 n<=25"] = all(
        search_sums(p, 60, 25) == naive_solutions(p, 60, 25) for p in ("padovan", "perrin"))

    doubled = ("--precision-bits", "512", "--cfrac-bits", "8192")
    sub["precision doubling"] = all(
        _same_up_to_enclosure(certificate(p), certificate(p, *doubled))
        for p in ("padovan", "perrin"))

    elapsed = time.perf_counter() - t0
    failing = [name for name, ok in sub.items() if not ok]
    detail = f"{len(sub) - len(failing)}/{len(sub)} suites pass in {elapsed:.1f}s"
    if growth_bad:
        detail += f"; growth envelope fails at {growth_bad}"
    if failing:
        detail += f"; failing: {failing}"
    return report(6, not failing and elapsed < 60, detail)


def criterion_7() -> bool:
    outputs = {}
    for problem in ("padovan", "perrin"):
        runs = [subprocess.run([sys.executable, "-m", "jacobsthal_sums", "pipeline",
                                "--problem", problem, "--json"], capture_output=True)
                for _ in range(2)]
        outputs[problem] = runs[0].stdout == runs[1].stdout and len(runs[0].stdout) > 0
    return report(7, all(outputs.values()), f"byte-identical reruns {outputs}")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7]


def test_criterion_1():
    assert criterion_1()


def test_criterion_2():
    assert criterion_2()


def test_criterion_3():
    assert criterion_3()


def test_criterion_4():
    assert criterion_4()


def test_criterion_5():
    assert criterion_5()


def test_criterion_6():
    assert criterion_6()


def test_criterion_7():
    assert criterion_7()


if __name__ == "__main__":
    results = [check() for check in CRITERIA]
    print(f"{sum(results)}/{len(results)} criteria pass")
    sys.exit(0 if all(results) else 1)
