"""Acceptance criteria 1-14.

Run with ``pytest tests/test_acceptance.py``; a summary section prints
one PASS/FAIL line per criterion after the test report.
"""

import io
import json
import random
import sys
import time
from fractions import Fraction
from importlib import resources

import pytest

from acceptance_log import criterion
from qrefl.characters import (
    CharacterMatrix,
    check_grassmann_invariance,
    check_invertibility_criterion,
    cylinder_scale,
    grassmann_matrix,
    omega_from_character,
    qdet_antisym,
    qdet_monomial_oracle,
    screen_reflection_solutions,
)
from qrefl.cli import main
from qrefl.noumi import (
    build_k_operator,
    check_centrality_bf,
    check_centrality_bs,
    grassmann_coideal_generators,
)
from qrefl.rea import (
    check_braid,
    check_four_braid,
    check_hecke,
    check_operator_reflection,
    check_qybe,
    check_reflection,
    type_b_rep,
)
from qrefl.scalar import Scalar, parse_scalar, print_scalar, q_pow, s_var
from qrefl.tensorlin import TensorOperator, det_fraction_free
from qrefl.uqsln import (
    WeightVector,
    antipode,
    coproduct_on_pair,
    evaluate,
    r_matrix,
    rhat,
    tau_action,
    vector_rep,
)

DATA = resources.files("qrefl") / "data"


def Q(e, N):
    return q_pow(Fraction(e), N)


def cofactor_det(rows):
    if len(rows) == 1:
        return rows[0][0]
    total = Scalar(0)
    for j, a in enumerate(rows[0]):
        if a:
            term = a * cofactor_det([r[:j] + r[j + 1:] for r in rows[1:]])
            total = total + term if j % 2 == 0 else total - term
    return total


def n2_battery():
    out = [
        CharacterMatrix.identity(2),
        CharacterMatrix.identity(2).scaled(s_var(2) + Q(1, 2)),
        grassmann_matrix(2),
        CharacterMatrix.from_rows([[1, 1], [0, 1]], root_order=2),
        CharacterMatrix(TensorOperator.diagonal(2, [Q(1, 2), Scalar(1, 2)])),
        CharacterMatrix.from_rows([[0, 1], [1, 0]], root_order=2),
    ]
    return out + screen_reflection_solutions(2)


# ----------------------------------------------------------------- 1-4

@criterion(1)
def test_criterion_01_qybe():
    for n in (2, 3):
        assert check_qybe(r_matrix(n)).passed
    start = time.perf_counter()
    rep = check_qybe(r_matrix(4))
    elapsed = time.perf_counter() - start
    assert rep.passed
    assert elapsed < 10, f"n = 4 took {elapsed:.1f} s"


@criterion(2)
def test_criterion_02_braid_and_intertwiner():
    for n in (2, 3, 4):
        Rh = rhat(n)
        assert check_braid(Rh).passed
        for g in vector_rep(n).generators():
            D = coproduct_on_pair(g, n)
            assert Rh @ D == D @ Rh, (n, g)


@criterion(3)
def test_criterion_03_hecke():
    # recover the eigenvalue pair at n = 2 from the 2x2 block on span(v1v2, v2v1)
    Rh = rhat(2)
    a, b, c, d = Rh[1, 1], Rh[1, 2], Rh[2, 1], Rh[2, 2]
    trace, det = a + d, a * d - b * c
    lam1, lam2 = Q(Fraction(1, 2) - 1, 2), -Q(Fraction(1, 2) + 1, 2)
    assert lam1 + lam2 == trace and lam1 * lam2 == det
    assert Rh[0, 0] == lam1 and Rh[3, 3] == lam1
    for n in (2, 3):
        assert check_hecke(rhat(n)).passed


@criterion(4)
def test_criterion_04_antipode_square():
    for n in (2, 3):
        g = vector_rep(n)
        rho2 = 2 * WeightVector.rho(n)
        for gen in g.generators():
            lhs = evaluate(antipode(antipode(gen)), g)
            assert lhs == tau_action(-rho2, n) @ g.matrix(gen) @ tau_action(rho2, n), (n, gen)


# ----------------------------------------------------------------- 5-7

@criterion(5)
def test_criterion_05_grassmann_reflection():
    for n in (2, 4):
        assert check_reflection(r_matrix(n), grassmann_matrix(n, s_var(n))).passed
    start = time.perf_counter()
    rep = check_reflection(r_matrix(6), grassmann_matrix(6, s_var(6)))
    elapsed = time.perf_counter() - start
    assert rep.passed
    assert elapsed < 60, f"n = 6 took {elapsed:.1f} s"


@criterion(6)
def test_criterion_06_omega_relations():
    for n in (2, 4, 6):
        s = s_var(n)
        assert check_grassmann_invariance(omega_from_character(grassmann_matrix(n, s)), s).passed
    s = s_var(2)
    omega = omega_from_character(grassmann_matrix(2, s)).matrix
    assert omega.entries == [[0, Q(1, 2)], [1, s * (Q(1, 2) - Q(-1, 2))]]


# values fixed from the cofactor expansion over the codiagonal
GRASSMANN_DET = {2: -Q(1, 2), 4: Q(2, 4), 6: -Q(3, 6)}


@criterion(7)
def test_criterion_07_grassmann_determinant():
    for n, expected in GRASSMANN_DET.items():
        M = grassmann_matrix(n, s_var(n))
        oracle = cofactor_det(M.entries)
        assert oracle == expected
        assert det_fraction_free(M.matrix) == oracle
        assert oracle and not oracle.depends_on_s()
        for s in (Scalar(0), Scalar(7), Q(1, n) - 2):
            assert det_fraction_free(grassmann_matrix(n, s).matrix) == expected


# ----------------------------------------------------------------- 8-9

def dual_route_battery():
    out = [grassmann_matrix(2), CharacterMatrix(TensorOperator.diagonal(2, [Scalar(0, 2), s_var(2)]))]
    for n in (2, 3):
        out.append(CharacterMatrix.identity(n))
        out.append(CharacterMatrix.identity(n).scaled(s_var(n) + Q(1, n)))
        out.extend(screen_reflection_solutions(n))
    return out


@criterion(8)
def test_criterion_08_qdet_dual_route():
    for n in (2, 3):
        assert qdet_antisym(CharacterMatrix.identity(n)) == 1
    for M in dual_route_battery():
        assert qdet_antisym(M) == qdet_monomial_oracle(M)


@criterion(9)
def test_criterion_09_invertibility_criterion():
    singular = 0
    battery = dual_route_battery() + [grassmann_matrix(4), grassmann_matrix(6)]
    for M in battery:
        assert check_reflection(r_matrix(M.n), M).passed
        rep = check_invertibility_criterion(M)
        assert rep.passed
        singular += not rep.values["det"]
    screened_singular = [M for M in screen_reflection_solutions(2) if not det_fraction_free(M.matrix)]
    assert screened_singular and singular >= len(screened_singular)


# ---------------------------------------------------------------- 10-11

@criterion(10)
def test_criterion_10_operator_reflection_and_centrality():
    for M in (CharacterMatrix.identity(2), grassmann_matrix(2), grassmann_matrix(4)):
        K = build_k_operator(M)
        assert check_operator_reflection(K, r_matrix(M.n)).passed
        assert check_centrality_bf(K).passed


@criterion(11, "a")
def test_criterion_11a_coideal_centrality():
    for n in (2, 4):
        s = s_var(n)
        K = build_k_operator(grassmann_matrix(n, s))
        assert check_centrality_bs(K, grassmann_coideal_generators(n, s)).passed


@criterion(11, "b")
def test_criterion_11b_scalar_character_is_rejected():
    # The q-trace image of c*I is a scalar matrix on the simple module V, so
    # it commutes with every coideal generator; this assertion cannot hold.
    for n in (2, 4):
        s = s_var(n)
        c = s + Q(1, n)
        K = build_k_operator(CharacterMatrix.identity(n).scaled(c))
        assert not check_centrality_bs(K, grassmann_coideal_generators(n, s)).passed


# ---------------------------------------------------------------- 12-14

@criterion(12)
def test_criterion_12_type_b():
    _, rep = type_b_rep(2, 3, grassmann_matrix(2, s_var(2)), Q(Fraction(3, 2), 2))
    assert rep.passed and all(p.passed for p in rep.parts)
    assert cylinder_scale(grassmann_matrix(2)) == grassmann_matrix(2).scaled(Q(Fraction(3, 2), 2))
    Rh = rhat(2)
    outcomes = set()
    for M in n2_battery():
        re = check_reflection(r_matrix(2), M).passed
        assert check_four_braid(2, Rh, M).passed == re
        outcomes.add(re)
    assert outcomes == {True, False}


def _random_scalar(rng, N=2):
    def laurent(max_terms):
        terms = {}
        for _ in range(rng.randint(0, max_terms)):
            key = (rng.randint(-4, 4), rng.randint(0, 2))
            terms[key] = Fraction(rng.randint(-20, 20), rng.randint(1, 4))
        return Scalar.from_terms({k: v for k, v in terms.items() if v}, N)

    num, den = laurent(3), laurent(2)
    return num / den if den else num


@criterion(13)
def test_criterion_13_scalar_layer():
    rng = random.Random(20261019)
    for _ in range(1000):
        a, b, c = (_random_scalar(rng) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a + b == b + a and a * b == b * a
        assert a * (b + c) == a * b + a * c
        assert a - a == 0
        if a:
            assert a * a.inverse() == 1
    for path in DATA.iterdir():
        if path.name.endswith(".json"):
            doc = json.loads(path.read_text())
            for row in doc["entries"]:
                for cell in row:
                    x = parse_scalar(cell, doc["root_order"])
                    assert print_scalar(x) == cell
                    assert parse_scalar(print_scalar(x), doc["root_order"]) == x


def _cli(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


@criterion(14)
def test_criterion_14_cli(tmp_path):
    code, first = _cli("verify-re", str(DATA / "grassmann_n4.json"))
    assert code == 0
    assert _cli("verify-re", str(DATA / "grassmann_n4.json"))[1] == first
    doc = json.loads((DATA / "grassmann_n4.json").read_text())
    doc["entries"][0][0] = "1"
    bad = tmp_path / "perturbed.json"
    bad.write_text(json.dumps(doc))
    code, text = _cli("verify-re", str(bad))
    assert code == 1 and "witness" in json.loads(text)["checks"][0]
    broken = tmp_path / "broken.json"
    broken.write_text('{"n": 2, "entries": [')
    assert _cli("verify-re", str(broken))[0] == 2


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-rN"]))
