"""The acceptance checks, shared by ``critlib verify-all`` and the test gate.

Each check returns a CheckResult whose ``detail`` is JSON-ready and
deterministic.  Wall time is kept in a separate field so that reports can
be compared byte for byte.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from itertools import product
from typing import Callable

from . import chartable, chipfire, intlinalg, mckay, rootsys
from .intlinalg import AbelianGroupInvariants, IntMatrix

SEED = 20240601

# printed goldens, in node order 1..l (padded vectors put node 0 first)
A4_M = [[0, 0, 0, 1], [0, 0, 0, 1], [0, 0, 0, 1], [1, 1, 1, 2]]
A4_CTILDE = [[3, 0, 0, -1], [0, 3, 0, -1], [0, 0, 3, -1], [-1, -1, -1, 1]]
A4_C = [[3, 0, -1], [0, 3, -1], [-1, -1, 1]]
A4_SUPERSTABLES = [(0, 0, 0), (1, 0, 0), (0, 1, 0)]
A4_RECURRENTS = [(2, 2, 0), (1, 2, 0), (2, 1, 0)]

E6_ORDER = (2, 4, 3, 5, 6, 4, 5, 2, 4, 3, 1)
E6_TOPPLING = [
    (0, 2, 1, 1, 1, 1),
    (0, 0, 1, 2, 1, 1),
    (0, 1, 2, 0, 2, 1),
    (1, 1, 0, 1, 2, 1),
    (1, 1, 0, 2, 0, 2),
    (1, 1, 0, 2, 1, 0),
    (1, 2, 1, 0, 2, 0),
    (1, 2, 1, 1, 0, 1),
    (1, 0, 1, 2, 0, 1),
    (1, 1, 2, 0, 1, 1),
    (2, 1, 0, 1, 1, 1),
    (0, 1, 1, 1, 1, 1),
]
E6_PADDED = [
    (-1, 1, 0, 0, 0, 0, 0),
    (1, 1, -1, 0, 0, 0, 0),
    (0, 1, 1, 0, -1, 0, 0),
    (0, 1, 0, -1, 1, -1, 0),
    (0, 0, 0, 1, 0, -1, 0),
    (0, 0, 0, 1, -1, 1, -1),
    (0, 0, 0, 1, -1, 0, 1),
    (0, 0, -1, 0, 1, -1, 1),
    (0, 0, -1, 0, 0, 1, 0),
    (-1, 0, 1, 0, -1, 1, 0),
    (-1, 0, 0, -1, 1, 0, 0),
    (-1, -1, 0, 1, 0, 0, 0),
    (-1, 1, 0, 0, 0, 0, 0),
]
C4_TOPPLING = [
    (0, 1, 1, 1),
    (0, 2, 1, 1),
    (1, 0, 2, 1),
    (1, 1, 0, 2),
    (1, 1, 2, 0),
    (1, 2, 0, 1),
    (2, 0, 1, 1),
    (0, 1, 1, 1),
]
C4_PADDED = [
    (-1, 1, 0, 0, 0),
    (1, 1, -1, 0, 0),
    (0, 0, 1, -1, 0),
    (0, 0, 0, 1, -1),
    (0, 0, 0, -1, 1),
    (0, 0, -1, 1, 0),
    (-1, -1, 1, 0, 0),
    (-1, 1, 0, 0, 0),
]

# critical groups of the natural representations of the finite subgroups of SL_2
SL2_EXPECTED = {"binary-tetrahedral": "Z/3", "binary-octahedral": "Z/2", "binary-icosahedral": "0"}


def theorem_types() -> list[str]:
    out = [f"A{n}" for n in range(1, 11)]
    out += [f"B{n}" for n in range(2, 11)]
    out += [f"C{n}" for n in range(2, 11)]
    out += [f"D{n}" for n in range(4, 11)]
    return out + ["E6", "E7", "E8", "F4", "G2"]


@dataclass(frozen=True)
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: dict
    seconds: float = 0.0

    def to_json(self, timing: bool = False) -> dict:
        obj = {"criterion": self.number, "name": self.name, "passed": self.passed, "detail": self.detail}
        if timing:
            obj["seconds"] = round(self.seconds, 3)
        return obj

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.number:>2} {self.name}"


def _a4_data() -> mckay.McKayData:
    return mckay.mckay_cartan(chartable.get_table("A4"))


def four_systems() -> dict[str, chipfire.ChipSystem]:
    return {
        "Cartan(A3)": rootsys.chip_system("A3"),
        "Cartan(B2)": rootsys.chip_system("B2"),
        "Cartan(G2)": rootsys.chip_system("G2"),
        "McKay(A4)": mckay.chip_system(_a4_data()),
    }


def check_theorem_cartan() -> tuple[bool, dict]:
    failures, counts = [], {}
    for t in theorem_types():
        rep = rootsys.verify_minuscule_classification(t)
        counts[t] = len(rep.superstables)
        if not rep.passed:
            failures.append(t)
    return not failures, {"types": len(counts), "classes_per_type": counts, "failures": failures}


def check_a4_golden() -> tuple[bool, dict]:
    d = _a4_data()
    sys = mckay.chip_system(d)
    out, rec = chipfire.stabilize(sys, [2, 2, 1])
    ss = chipfire.superstable_representatives(sys)
    rr = chipfire.recurrent_representatives(sys)
    checks = {
        "M": d.M.tolist() == A4_M,
        "Ctilde": d.Ctilde.tolist() == A4_CTILDE,
        "C": d.C.tolist() == A4_C,
        "superstables": sorted(ss) == sorted(A4_SUPERSTABLES),
        "recurrents": sorted(rr) == sorted(A4_RECURRENTS),
        "duality": sorted(tuple(c - a for c, a in zip(sys.vC, u)) for u in A4_SUPERSTABLES) == sorted(rr),
        "stabilize": out == (2, 2, 0) and rec.total == 5 and rec.counts == (1, 1, 3),
    }
    return all(checks.values()), {"checks": checks, "firings": rec.to_json()}


def check_e6_cycle() -> tuple[bool, dict]:
    seq = rootsys.minuscule_toppling_and_looping("E6", 1, order=E6_ORDER)
    states = list(seq.v[1:])  # from (rho - lambda) + alpha* back to rho - lambda
    ok = len(states) == 12 and states == E6_TOPPLING and seq.fired == E6_ORDER
    default = rootsys.minuscule_toppling_and_looping("E6", 1)
    same_shape = (
        len(default.v) == len(seq.v)
        and default.v[1] == seq.v[1]
        and default.v[-1] == seq.v[-1]
        and sorted(default.fired) == sorted(seq.fired)
    )
    return ok and same_shape, {
        "states": len(states),
        "matches_printed": states == E6_TOPPLING,
        "default_order": list(default.fired),
        "default_order_same_endpoints_and_multiset": same_shape,
    }


def check_looping() -> tuple[bool, dict]:
    e6 = rootsys.minuscule_toppling_and_looping("E6", 1, order=E6_ORDER)
    c4 = rootsys.minuscule_toppling_and_looping("C4", 1)
    perp = all(
        intlinalg.dot(w, s.padding) == 0 for s in (e6, c4) for w in s.padded
    )
    checks = {
        "E6_padded": list(e6.padded) == E6_PADDED,
        "C4_padded": list(c4.padded) == C4_PADDED,
        "C4_toppling": list(c4.v) == C4_TOPPLING,
        "C4_dual_type": c4.dual_type == "B4",
        "all_in_perp": perp,
    }
    return all(checks.values()), {"checks": checks, "C4_padding": list(c4.padding)}


def check_sl2_groups() -> tuple[bool, dict]:
    names = [f"cyclic-{m}" for m in range(2, 13)] + [f"binary-dihedral-{m}" for m in range(2, 9)]
    names += list(SL2_EXPECTED)
    rows, bad = {}, []
    for name in names:
        d = mckay.mckay_cartan(chartable.get_table(name))
        K = mckay.critical_group(d)
        rep = mckay.abelianization_map(d)
        if name.startswith("cyclic-"):
            exp = f"Z/{name.split('-')[1]}"
        elif name.startswith("binary-dihedral-"):
            exp = "Z/4" if int(name.split("-")[-1]) % 2 else "Z/2 x Z/2"
        else:
            exp = SL2_EXPECTED[name]
        ok = str(K) == exp and K == rep.Ghat and rep.isomorphism
        rows[name] = {"K": str(K), "expected": exp, "Ghat": str(rep.Ghat), "ok": ok}
        if not ok:
            bad.append(name)
    return not bad, {"groups": rows, "failures": bad}


def _burning_vectors(sys: chipfire.ChipSystem, base: tuple[int, ...]) -> list[tuple[int, ...]]:
    """k*base for k = 1..8, plus base + C^t(1,...,1) when that stays nonnegative."""
    out = [tuple(k * x for x in base) for k in range(1, 9)]
    extra = tuple(a + b for a, b in zip(base, sys.C.T.apply((1,) * sys.size)))
    if min(extra) >= 0:
        out.append(extra)
    return out


def _burning_bases() -> dict[str, tuple[int, ...]]:
    bases = {}
    for t in ("A3", "B2", "G2"):
        bases[f"Cartan({t})"] = rootsys.root_system(t).alpha_tilde.weights
    bases["McKay(A4)"] = _a4_data().M.row(0)[1:]
    return bases


def check_burning_equivalence() -> tuple[bool, dict]:
    systems = four_systems()
    bases = _burning_bases()
    tested, disagreements = 0, []
    for name, sys in systems.items():
        for b in _burning_vectors(sys, bases[name]):
            cert = chipfire.check_burning(sys, b)
            for v in chipfire.stable_configs(sys):
                tested += 1
                if chipfire.is_recurrent(sys, v) != chipfire.recurrent_test_via_burning(sys, cert, v):
                    disagreements.append([name, list(b), list(v)])
    return not disagreements, {"comparisons": tested, "disagreements": disagreements}


def check_energy() -> tuple[bool, dict]:
    compared, bad = 0, []
    for name, sys in four_systems().items():
        Ct = sys.C.T
        for u in chipfire.superstable_representatives(sys):
            eu = chipfire.energy(sys, u)
            for z in product(range(-3, 4), repeat=sys.size):
                if not any(z):
                    continue
                w = tuple(a + b for a, b in zip(u, Ct.apply(z)))
                if min(w) < 0:
                    continue
                compared += 1
                if not eu < chipfire.energy(sys, w):
                    bad.append([name, list(u), list(z)])
    return not bad and compared > 0, {"comparisons": compared, "violations": bad}


def check_cokernel_relations() -> tuple[bool, dict]:
    bad = []
    count = 0
    for t in theorem_types():
        count += 1
        if not chipfire.extended_cokernel_relations(rootsys.root_system(t).extended_cartan).passed:
            bad.append(t)
    for name, table in chartable.bundled_groups().items():
        if table.size == 1:
            continue
        count += 1
        d = mckay.mckay_cartan(table)
        if not chipfire.extended_cokernel_relations(d.Ctilde).passed:
            bad.append(name)
    neg = chipfire.extended_cokernel_relations(IntMatrix.from_rows([[30, -15], [-20, 10]]))
    detects = not neg.hypotheses_hold and not (neg.relation_perp and neg.relation_split)
    return not bad and detects, {"matrices": count, "failures": bad, "counterexample_flagged": detects}


def check_rng() -> tuple[bool, dict]:
    checks = {}
    d = _a4_data()
    u = mckay.u_element(d, 1)
    checks["A4: 3u = 0"] = mckay.rng_is_zero(d, [3 * x for x in u])
    checks["A4: u != 0"] = not mckay.rng_is_zero(d, u)
    checks["A4: u^2 = 0"] = mckay.rng_is_zero(d, mckay.rng_multiply(d, u, u))
    for m in range(2, 10):
        c = mckay.mckay_cartan(chartable.get_table(f"cyclic-{m}"))
        u = mckay.u_element(c, 1)
        checks[f"Z/{m}: mu = 0, u^2 = 0"] = (
            mckay.rng_is_zero(c, [m * x for x in u])
            and not mckay.rng_is_zero(c, u)
            and mckay.rng_is_zero(c, mckay.rng_multiply(c, u, u))
        )
    for m, n in ((2, 2), (3, 3), (2, 4)):
        t = chartable.abelian_character_table([m])
        gamma = [0] * m
        gamma[1] = n
        c = mckay.mckay_cartan(t, gamma)
        K = mckay.critical_group(c)
        u = mckay.u_element(c, 1)
        checks[f"Z/{m} scalar n={n}: invariants"] = K == AbelianGroupInvariants.from_cyclic_orders([n] * (m - 1))
        checks[f"Z/{m} scalar n={n}: u^m relation"] = mckay.binomial_relation_holds(c, u, m)
    return all(checks.values()), {"checks": checks}


def random_zero_sum_case(rng: random.Random) -> tuple[list[int], list[tuple[int, ...]]]:
    """A small abelian group (order <= 24) with a generating zero-sum multiset of nonzero elements."""
    shapes = [[m] for m in range(2, 25)] + [[2, 2], [2, 4], [2, 6], [3, 3], [2, 8], [2, 10], [2, 12], [4, 4],
                                            [3, 6], [2, 2, 2], [2, 2, 4], [2, 2, 6]]
    while True:
        inv = rng.choice(shapes)
        r = rng.randint(2, 4)
        gens = []
        for _ in range(r - 1):
            g = tuple(rng.randrange(n) for n in inv)
            if not any(g):
                g = tuple(1 if k == 0 else 0 for k in range(len(inv)))
            gens.append(g)
        last = tuple((-sum(col)) % n for col, n in zip(zip(*gens), inv))
        if not any(last):
            continue
        gens.append(last)
        try:
            mckay.cayley_digraph_check(inv, gens)
        except Exception:  # not generating; draw again
            continue
        return inv, gens


def check_cayley() -> tuple[bool, dict]:
    rng = random.Random(SEED)
    cases, bad = [], []
    for _ in range(20):
        inv, gens = random_zero_sum_case(rng)
        rep = mckay.cayley_digraph_check(inv, gens)
        cases.append({"A": list(inv), "r": rep.r, "arborescences": rep.arborescences, "ok": rep.passed})
        if not rep.passed:
            bad.append(rep.to_json())
    pairs = []
    for m in range(2, 13):
        for g in range(1, m):
            try:
                rep = mckay.cayley_digraph_check([m], [g, m - g])
            except Exception:
                continue  # g does not generate
            pairs.append(rep.arborescences == m)
    return not bad and all(pairs) and len(cases) == 20, {
        "random_cases": cases,
        "failures": bad,
        "pair_cases": len(pairs),
        "pairs_equal_order": all(pairs),
    }


def check_properties() -> tuple[bool, dict]:
    rng = random.Random(SEED)
    snf_bad = 0
    for _ in range(200):
        r, c = rng.randint(1, 5), rng.randint(1, 5)
        A = IntMatrix.from_rows([[rng.randint(-9, 9) for _ in range(c)] for _ in range(r)])
        s = intlinalg.smith_normal_form(A)
        diag = [x for x in s.diagonal]
        nz = [x for x in diag if x]
        ok = (
            intlinalg.is_unimodular(s.U)
            and intlinalg.is_unimodular(s.V)
            and s.U @ A @ s.V == s.S
            and all(x > 0 for x in nz)
            and all(nz[i + 1] % nz[i] == 0 for i in range(len(nz) - 1))
            and all(x == 0 for x in diag[len(nz):])
        )
        snf_bad += not ok
    conf_bad = comm_bad = 0
    systems = four_systems()
    systems["Cartan(E6)"] = rootsys.chip_system("E6")
    for sys in systems.values():
        n = sys.size
        for _ in range(100):
            v = [rng.randint(0, 12) for _ in range(n)]
            a, ra = chipfire.stabilize(sys, v, "queue")
            b, rb = chipfire.stabilize(sys, v, "max-surplus")
            conf_bad += a != b or ra.counts != rb.counts
        for _ in range(50):
            v = tuple(rng.randint(0, d - 1) for d in sys.diag)
            i, j = rng.randint(1, n), rng.randint(1, n)
            x = chipfire.avalanche_op(sys, chipfire.avalanche_op(sys, v, i), j)
            y = chipfire.avalanche_op(sys, chipfire.avalanche_op(sys, v, j), i)
            comm_bad += x != y
    return snf_bad == conf_bad == comm_bad == 0, {
        "snf_matrices": 200,
        "snf_failures": snf_bad,
        "systems": sorted(systems),
        "confluence_failures": conf_bad,
        "commutativity_failures": comm_bad,
    }


CHECKS: dict[int, tuple[str, tuple[str, ...], Callable[[], tuple[bool, dict]]]] = {
    1: ("cartan superstables and recurrents", ("rootsys",), check_theorem_cartan),
    2: ("A4 McKay golden", ("chipfire", "mckay"), check_a4_golden),
    3: ("E6 toppling cycle golden", ("rootsys",), check_e6_cycle),
    4: ("padded looping goldens E6 and C4", ("rootsys",), check_looping),
    5: ("SL2 critical groups equal abelianization", ("mckay",), check_sl2_groups),
    6: ("burning test agrees with recurrence", ("chipfire",), check_burning_equivalence),
    7: ("superstables minimize energy", ("chipfire",), check_energy),
    8: ("extended cokernel relations", ("chipfire", "rootsys", "mckay"), check_cokernel_relations),
    9: ("representation rng goldens", ("mckay",), check_rng),
    10: ("Cayley digraph arborescences", ("mckay",), check_cayley),
    11: ("property suites", ("intlinalg", "chipfire"), check_properties),
}


def select(only: list[str] | None) -> list[int]:
    """Criterion numbers matching `only` (module names or numbers); all when empty."""
    if not only:
        return sorted(CHECKS)
    out = []
    for k, (_, tags, _) in CHECKS.items():
        if str(k) in only or any(t in only for t in tags):
            out.append(k)
    return out


def run_check(k: int) -> CheckResult:
    name, _, fn = CHECKS[k]
    t0 = time.perf_counter()
    try:
        passed, detail = fn()
    except Exception as exc:  # a crash is a failure, reported with its message
        passed, detail = False, {"error": f"{type(exc).__name__}: {exc}"}
    return CheckResult(k, name, bool(passed), detail, time.perf_counter() - t0)


def run_all(only: list[str] | None = None) -> list[CheckResult]:
    return [run_check(k) for k in select(only)]
