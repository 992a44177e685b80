"""End-to-end acceptance gate: ten criteria, one test and one printed
PASS/FAIL line each.

Two criteria (A6, A7) assert identities that the implemented objects
genuinely do not satisfy; those tests fail honestly, and their assertion
messages describe the counterexamples the engine finds.
"""

import itertools
import random
import time
from fractions import Fraction
from math import lcm

import mpmath as mp

from fracgalois import intmat
from fracgalois.cyclo import PrecisionContext, factorize
from fracgalois.fields import (full_cyclotomic, place_set, plus_field,
                               relative_model, relative_place_set)
from fracgalois.gring import (FiniteGModule, GroupRingElement, IdealLattice,
                              abelian_group, characters)
from fracgalois.jideal import (j_base_case, j_via_theorem, run_check,
                               shipped_classgroup, torsion_order)
from fracgalois.lfun import l_value_at_0, partial_zeta_all, vanishing_order
from fracgalois.units import (quotient_module, stark_module, stark_residuals,
                              sunit_group)

CTX = PrecisionContext(bits=192, tol_exp=-100)      # tol 2^-100 < 1e-30


def _line(name, ok, detail):
    print(f"{name}: {'PASS' if ok else 'FAIL'} {detail}")


# ---------------------------------------------------------------------------

def test_a1_stickelberger_identity():
    start = time.monotonic()
    bad = []
    for f in range(3, 61):
        rep = run_check("STICK_IDENT", {"f": f}, CTX)
        if rep.status != "pass":
            bad.append((f, rep.status))
    elapsed = time.monotonic() - start
    ok = not bad and elapsed < 1.0
    _line("A1", ok, f"theta = N/2 - classical for f in 3..60 "
                    f"({elapsed:.2f}s)")
    assert not bad, bad
    assert elapsed < 1.0, elapsed


def test_a2_exact_numeric_bridge():
    start = time.monotonic()
    worst = mp.mpf(0)
    with CTX.guard():
        bound = mp.mpf(10) ** -30
        for f in range(3, 41):
            model = full_cyclotomic(f)
            pset = place_set(model, tuple(p for p, _ in factorize(f)))
            z0 = partial_zeta_all(model, pset, 0)
            for chi in characters(model.group):
                num = mp.mpc(0)
                for e, q in z0.items():
                    num += chi.value(e).embed(1) * CTX.mpf(q)
                exact = l_value_at_0(model, pset, chi).embed(1)
                worst = max(worst, abs(num - exact))
    elapsed = time.monotonic() - start
    ok = worst < bound and elapsed < 30.0
    _line("A2", ok, f"max |char-sum - exact L_S(0,chi)| = "
                    f"{mp.nstr(worst, 3)} over f <= 40 ({elapsed:.1f}s)")
    assert worst < bound, mp.nstr(worst, 10)
    assert elapsed < 30.0, elapsed


def test_a3_vanishing_order_table():
    start = time.monotonic()
    pairs = [(3, 1), (3, 2), (5, 1), (5, 2), (7, 1), (7, 2),
             (11, 1), (11, 2), (13, 1)]          # f = p^n <= 125
    bad = []
    for p, n in pairs:
        f = p ** n
        kf = full_cyclotomic(f)
        ps = place_set(kf, (p,))
        c = kf.conjugation()
        for chi in characters(kf.group):
            r = vanishing_order(kf, ps, chi)
            even = chi.value(c).is_rational() \
                and chi.value(c).as_fraction() == 1
            if r != (1 if even else 0):
                bad.append(("full", f, chi.exps, r))
        kp = plus_field(f)
        psp = place_set(kp, (p,))
        for chi in characters(kp.group):
            if vanishing_order(kp, psp, chi) != 1:
                bad.append(("plus", f, chi.exps))
    elapsed = time.monotonic() - start
    ok = not bad and elapsed < 5.0
    _line("A3", ok, f"r = [chi even] on full, r = 1 on plus, "
                    f"f up to 121 ({elapsed:.2f}s)")
    assert not bad, bad
    assert elapsed < 5.0, elapsed


def test_a4_stark_equations():
    start = time.monotonic()
    bound = mp.mpf(10) ** -30
    worst_all = mp.mpf(0)
    for p in [5, 7, 11, 13]:
        k = plus_field(p)
        _, worst = stark_residuals(k, place_set(k, (p,)), CTX)
        worst_all = max(worst_all, worst)
    elapsed = time.monotonic() - start
    ok = worst_all < bound and elapsed < 30.0
    _line("A4", ok, f"max_sigma |log|eps^sigma| + 2 zeta_S'(0,sigma)| = "
                    f"{mp.nstr(worst_all, 3)} for p in 5..13 ({elapsed:.1f}s)")
    assert worst_all < bound, mp.nstr(worst_all, 10)
    assert elapsed < 30.0, elapsed


def test_a5_j_for_real_quintic_field():
    start = time.monotonic()
    k = plus_field(5)
    ps = place_set(k, (5,))
    res = j_via_theorem(k, ps, CTX)
    g = k.group
    s = g.element_of_residue(2)
    expected = IdealLattice.from_generators(
        g, [GroupRingElement.one(g),
            (GroupRingElement.one(g) + GroupRingElement.basis(g, s))
            * Fraction(1, 2)])
    lattice_ok = res.ideal == expected \
        and res.ideal.to_jsonable() == {"den": 2, "cols": [[2, 0], [1, 1]],
                                        "labels": ["1", "2"]}

    # independent oracle: exhaustive annihilator of U/E (order 2) over a
    # full set of residues mod its exponent
    m = quotient_module(sunit_group(k, ps, CTX), stark_module(k, ps, CTX), CTX)
    oracle = _oracle_annihilator(m)
    oracle_ok = oracle == res.ideal.scale(torsion_order(k)) == m.annihilator()

    indf = run_check("INDF", {"p": 5, "seed": 0, "count": 5}, CTX)
    srat = run_check("STARK_RAT", {"p": 5}, CTX)
    elapsed = time.monotonic() - start
    ok = (lattice_ok and oracle_ok and indf.status == "pass"
          and srat.status == "pass" and elapsed < 10.0)
    _line("A5", ok, f"J = <1, (1+sigma)/2>, oracle match, "
                    f"INDF={indf.status}, STARK_RAT={srat.status} "
                    f"({elapsed:.2f}s)")
    assert lattice_ok
    assert oracle_ok
    assert indf.status == "pass", indf.witnesses
    assert srat.status == "pass", srat.witnesses
    assert elapsed < 10.0, elapsed


def test_a6_full_cyclotomic_structure():
    start = time.monotonic()
    reports = {}
    for p in [5, 7]:
        reports[("RZERO", p)] = run_check(
            "RZERO", {"p": p, "subfield": "full"}, CTX)
        reports[("QNAT", p)] = run_check("QNAT", {"p": p}, CTX)
    elapsed = time.monotonic() - start
    failures = {k: r for k, r in reports.items() if r.status != "pass"}
    ok = not failures and elapsed < 60.0
    detail = ", ".join(f"{c}(p={p})={r.status}"
                       for (c, p), r in sorted(reports.items()))
    _line("A6", ok, f"{detail} ({elapsed:.1f}s)")
    assert not failures, (
        "QNAT fails at p = 5 and p = 7: the projection of J(full) to the "
        "real quotient strictly contains J(plus); the engine's witness is "
        "the element (1/2)*1, which lies in the projection but not in "
        "J(plus) = (1/2) ann(U+/E+). The discrepancy is 2-primary of index "
        "2^((p-3)/2) = |U+/E+| (it vanishes at p = 3, where that group is "
        "trivial). Witnesses: "
        + str({k: r.witnesses.get("witness_element") for k, r in
               failures.items()}))
    assert elapsed < 60.0, elapsed


def test_a7_relative_case():
    start = time.monotonic()
    ctx25 = PrecisionContext(bits=192, tol_exp=-84)     # tol 2^-84 < 1e-25
    reports = {}
    for p in [7, 11]:
        reports[("JREL", p)] = run_check("JREL", {"p": p}, CTX)
        reports[("BCH", p)] = run_check("BCH", {"p": p}, CTX)
        reports[("STARKC", p)] = run_check(
            "STARKC", {"p": p, "subfield": "relative"}, ctx25)
        m = relative_model(p)
        _, worst = stark_residuals(m, relative_place_set(m), ctx25)
        assert worst < mp.mpf(10) ** -25, (p, mp.nstr(worst, 8))
    elapsed = time.monotonic() - start
    failures = {k: r for k, r in reports.items() if r.status != "pass"}
    ok = not failures and elapsed < 60.0
    detail = ", ".join(f"{c}(p={p})={r.status}"
                       for (c, p), r in sorted(reports.items()))
    _line("A7", ok, f"{detail} ({elapsed:.1f}s)")
    assert not failures, (
        "JREL fails at p = 7 and p = 11: both asserted equalities are off "
        "by a 2-primary index. At p = 7 the relative annihilator lattice "
        "has covolume 196 while the transported side e*theta~*ann(U+/E+) "
        "has covolume 784; the transported side is strictly contained, "
        "index 4 = |U+/E+|. The two sides agree after inverting 2 "
        "(ell_equal holds at every odd ell), and the composed projection "
        "BCH does hold exactly, because (1+c) absorbs the same 2-primary "
        "defect. Statuses: "
        + str({k: {kk: vv for kk, vv in r.witnesses.items()
                   if kk in ("eq1", "eq2")} for k, r in failures.items()}))
    assert elapsed < 60.0, elapsed


# ---------------------------------------------------------------------------
# A8: seeded random modules vs exhaustive annihilator search

def _regular_perm_matrix(n):
    return tuple(tuple(1 if i == (j + 1) % n else 0 for j in range(n))
                 for i in range(n))


def _random_ideal(rng, g, m0):
    one = GroupRingElement.one(g)
    alpha = GroupRingElement(
        g, [Fraction(rng.randrange(m0)) for _ in range(g.order)])
    return IdealLattice.from_generators(g, [one * m0, alpha])


def _module_from_ideals(g, lats):
    n = g.order
    k = n * len(lats)
    relations = []
    for b, lat in enumerate(lats):
        assert lat.den == 1
        for col in lat.cols:
            full = [0] * k
            full[b * n:(b + 1) * n] = list(col)
            relations.append(tuple(full))
    if not g.invariant_factors:
        return FiniteGModule(g, k, relations, [])
    perm = _regular_perm_matrix(n)
    action = tuple(tuple(
        perm[i % n][j % n] if i // n == j // n else 0
        for j in range(k)) for i in range(k))
    return FiniteGModule(g, k, relations, [action])


def _oracle_annihilator(mod):
    """Exhaustive annihilator: sweep every group-ring element with
    coefficients mod the exponent of M, testing that it kills each
    generator (hence, additively, all of M)."""
    g = mod.group
    n = g.order
    k = mod.k
    rel = [[col[i] for col in mod.relations] for i in range(k)]
    u, d, _ = intmat.smith_normal_form(rel)
    diag = [d[i][i] for i in range(k)]
    exponent = 1
    for di in diag:
        exponent = lcm(exponent, abs(di))

    def in_relations(vec):
        for i in range(k):
            w = sum(u[i][t] * vec[t] for t in range(k))
            if w % diag[i]:
                return False
        return True

    mats = [mod.action_of(e) for e in g.elements]
    hits = [GroupRingElement.basis(g, e) * exponent for e in g.elements]
    for coeffs in itertools.product(range(exponent), repeat=n):
        if not any(coeffs):
            continue
        amat = [[sum(coeffs[t] * mats[t][i][j] for t in range(n))
                 for j in range(k)] for i in range(k)]
        if all(in_relations([amat[i][j] for i in range(k)]) for j in range(k)):
            hits.append(GroupRingElement(g, [Fraction(c) for c in coeffs]))
    return IdealLattice.from_generators(g, hits, close_under_group=False)


def test_a8_annihilator_engine_vs_exhaustive_search():
    start = time.monotonic()
    rng = random.Random(82001)
    checked = 0
    while checked < 100:
        cyclic = checked < 60
        if cyclic:
            n = rng.randint(1, 6)
            m0 = rng.choice([m for m in (2, 3, 4, 5, 7, 8, 9, 11, 13)
                             if m ** n <= 1200])
            g = abelian_group((n,)) if n > 1 else abelian_group(())
            lats = [_random_ideal(rng, g, m0)]
            size = lats[0].covolume()
            if not 2 <= size <= 200:
                continue
        else:
            n = rng.randint(1, 3)
            g = abelian_group((n,)) if n > 1 else abelian_group(())
            m0 = rng.choice([m for m in (2, 3, 4, 5, 7) if m ** n <= 1200])
            lats = [_random_ideal(rng, g, m0), _random_ideal(rng, g, m0)]
            size = lats[0].covolume() * lats[1].covolume()
            if not (2 <= size <= 200
                    and min(x.covolume() for x in lats) >= 2):
                continue
        mod = _module_from_ideals(g, lats)
        assert mod.order() == size

        ann = mod.annihilator()
        oracle = _oracle_annihilator(mod)
        assert ann == oracle, (checked, n, m0)

        fitt = mod.fitting_ideal()
        assert ann.contains_lattice(fitt), (checked, n, m0)
        if cyclic:
            assert fitt == ann, (checked, n, m0)
            assert ann == lats[0], (checked, n, m0)
        else:
            assert ann == lats[0].intersect(lats[1]), (checked, n, m0)
        checked += 1
    elapsed = time.monotonic() - start
    ok = checked == 100 and elapsed < 60.0
    _line("A8", ok, f"100 seeded modules over Z[C_n] (n <= 6, |M| <= 200): "
                    f"engine == exhaustive search, Fitt <= ann, "
                    f"Fitt = ann on cyclic ({elapsed:.1f}s)")
    assert checked == 100
    assert elapsed < 60.0, elapsed


def test_a9_class_group_containment():
    start = time.monotonic()
    bad = []
    for p in [3, 5, 7, 11, 13]:
        rep = run_check("CLCONT", {"p": p, "ell": 3}, CTX)
        if rep.status != "pass":
            bad.append((p, rep.status, rep.witnesses))
    clmod, provenance = shipped_classgroup()
    rep23 = run_check("CLCONT", {"p": 23, "ell": 3, "subfield": "full",
                                 "classgroup": clmod}, CTX)
    elapsed = time.monotonic() - start
    ok = not bad and rep23.status == "pass" and elapsed < 10.0
    _line("A9", ok, f"trivial cases p <= 13 and the shipped order-3 class "
                    f"group of conductor 23 at ell = 3 ({elapsed:.1f}s)")
    assert not bad, bad
    assert rep23.status == "pass", rep23.witnesses
    assert provenance
    assert elapsed < 10.0, elapsed


def test_a10_analytic_class_number_formula():
    start = time.monotonic()
    ctx20 = PrecisionContext(bits=192, tol_exp=-67)     # tol 2^-67 < 1e-20
    bound = mp.mpf(10) ** -20
    worst = mp.mpf(0)
    for which in ["Q", "Qsqrt5"]:
        res = j_base_case(which, ctx20)
        worst = max(worst, res.numeric["residual"])
        rep = run_check("ACNF", {"field": which}, ctx20)
        assert rep.status == "pass", rep.witnesses
    elapsed = time.monotonic() - start
    ok = worst < bound and elapsed < 5.0
    _line("A10", ok, f"|zeta*_K(0)/R_K + h/w| = {mp.nstr(worst, 3)} for "
                     f"K = Q, Q(sqrt5) ({elapsed:.2f}s)")
    assert worst < bound, mp.nstr(worst, 10)
    assert elapsed < 5.0, elapsed
