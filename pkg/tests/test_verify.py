"""Regularity certificates, theorem pipelines and the scenario harness."""

import json
import os
import tempfile

from takiffalg.autos import identity_automorphism
from takiffalg.invariants import coadjoint_index
from takiffalg.scalars import cyc, zeta_pow
from takiffalg.verify import (RegularityProfile, RegularityVerdict,
                              basic_degrees, check_N_regular, check_S_regular,
                              check_very_N, free_series,
                              invariant_transfer_check, run_scenario,
                              verify_adjoint_theorem,
                              verify_adjoint_theorem_plus,
                              verify_coadjoint_theorem)

SCENARIO_DIR = os.path.join(os.path.dirname(__file__), "..", "src",
                            "takiffalg", "scenarios")


def scenario_path(name):
    return os.path.join(SCENARIO_DIR, f"{name}.json")


def test_free_series():
    assert free_series([2, 3], 6) == [1, 0, 1, 1, 1, 1, 2]
    assert free_series([2, 2], 4) == [1, 0, 2, 0, 3]
    assert free_series([2, 2, 3], 4) == [1, 0, 2, 1, 3]
    assert free_series([1, 2, 3], 4) == [1, 1, 2, 3, 4]


def test_basic_degrees_table():
    assert basic_degrees("sl", 3) == [2, 3]
    assert basic_degrees("gl", 3) == [1, 2, 3]
    assert basic_degrees("so", 3) == [2]
    assert basic_degrees("so", 8) == [2, 4, 4, 6]
    assert basic_degrees("sp", 4) == [2, 4]
    assert basic_degrees("so", 2) == [1]


def test_S_regularity_with_witness(inv_sl3_c4, sl3_witnesses):
    v = check_S_regular(inv_sl3_c4, witness=sl3_witnesses["S"])
    assert v.status == "yes"


def test_S_regularity_by_sampling(inv_sl3_c4):
    v = check_S_regular(inv_sl3_c4, trials=20, seed=1)
    assert v.status == "yes"


def test_S_regularity_vacuous_for_identity(sl2_c2):
    theta = identity_automorphism(sl2_c2)
    v = check_S_regular(theta)
    assert v.status == "unknown"


def test_N_regularity_witness_legs(inv_sl3_c4, sl3_witnesses):
    good = check_N_regular(inv_sl3_c4, sl3_witnesses["N"])
    assert good.status == "yes"
    zero = check_N_regular(inv_sl3_c4, [cyc(0, 4)] * 8)
    assert zero.status == "unknown" and "zero witness" in zero.details
    not_in_block = check_N_regular(inv_sl3_c4, sl3_witnesses["g0"])
    assert not_in_block.status == "unknown"
    semisimple = check_N_regular(inv_sl3_c4, sl3_witnesses["S"])
    assert semisimple.status == "unknown"
    assert any("nilpotent" in d for d in semisimple.details)


def test_very_N_routes(inv_sl3_c4, inv_sl2_c4, sl3_witnesses):
    nv = check_N_regular(inv_sl3_c4, sl3_witnesses["N"])
    route = check_very_N(inv_sl3_c4, nv)
    assert route.status == "certified-via-sufficiency"
    assert route.route == "g0-semisimple"
    # witness route
    wit = check_very_N(inv_sl3_c4, nv, witnesses=[sl3_witnesses["N"]])
    assert wit.status == "witness-only"
    # sl2 > so2 certifies through the trace-free locally-free route
    i_ = zeta_pow(4, 1)
    w = [cyc(1, 4), i_, i_]
    nv2 = check_N_regular(inv_sl2_c4, w)
    assert nv2.status == "yes"
    route2 = check_very_N(inv_sl2_c4, nv2)
    assert route2.status == "certified-via-sufficiency"
    assert route2.route == "sl-locally-free"


def test_very_N_needs_N(inv_sl3_c4):
    unknown = RegularityVerdict("unknown")
    v = check_very_N(inv_sl3_c4, unknown)
    assert v.status == "unknown"


def test_very_N_sp4_sl_condition_fails(sp4_order4):
    g, theta, grading = sp4_order4
    wN = [cyc(0, 8)] * 10
    wN[g.labels.index("A12")] = cyc(1, 8)
    wN[g.labels.index("C11")] = cyc(1, 8)
    nv = check_N_regular(theta, wN, grading)
    assert nv.status == "yes"
    v = check_very_N(theta, nv, grading)
    assert v.status == "unknown"
    assert any("SL condition fails" in d for d in v.details)


def test_very_N_gl3_stabilizer_blocks_route(gl3_order3):
    g, theta, grading = gl3_order3
    w = [cyc(0, 3)] * 9
    w[g.labels.index("E21")] = cyc(1, 3)
    w[g.labels.index("E32")] = cyc(1, 3)
    nv = check_N_regular(theta, w, grading)
    assert nv.status == "yes"
    v = check_very_N(theta, nv, grading)
    assert v.status == "unknown"
    assert any("stabilizer" in d for d in v.details)


def test_adjoint_theorem_requires_witness(inv_sl2_c4):
    rep = verify_adjoint_theorem(inv_sl2_c4, 1, 4, [cyc(0, 4), cyc(1, 4),
                                                    cyc(0, 4)])
    assert not rep.hypothesis_ok


def test_adjoint_theorem_takiff_route(sl2_c2):
    theta = identity_automorphism(sl2_c2)
    witness = [cyc(0, 2), cyc(1, 2), cyc(0, 2)]
    rep = verify_adjoint_theorem(theta, 2, 4, witness, seed=1)
    assert rep.passed
    assert rep.observed_series == [1, 0, 2, 0, 3]
    assert rep.family_degrees == [2, 2]


def test_adjoint_theorem_sl3(inv_sl3_c4, sl3_witnesses):
    rep = verify_adjoint_theorem(inv_sl3_c4, 1, 4, sl3_witnesses["g0"],
                                 seed=1)
    assert rep.passed and rep.structure_match and rep.spans_match
    assert rep.observed_series == [1, 0, 1, 1, 1]


def test_adjoint_theorem_plus_sl3(inv_sl3_c4, sl3_witnesses):
    rep = verify_adjoint_theorem_plus(inv_sl3_c4, 1, 4, sl3_witnesses["g0"],
                                      basic_degrees("so", 3), seed=1)
    assert rep.passed
    assert rep.observed_series == [1, 0, 2, 1, 3]
    assert len(rep.family_degrees) == 3       # n rk(g) + rk(g0)


def test_coadjoint_theorem_hypotheses(inv_sl2_c4):
    unknown = RegularityVerdict("unknown")
    from takiffalg.verify import VeryNVerdict
    profile = RegularityProfile(unknown, unknown, VeryNVerdict("unknown"))
    rep = verify_coadjoint_theorem(inv_sl2_c4, 1, 4, profile)
    assert not rep.hypothesis_ok


def test_coadjoint_theorem_sl2(inv_sl2_c4):
    i_ = zeta_pow(4, 1)
    wS = [cyc(1, 4), cyc(0, 4), cyc(0, 4)]
    wN = [cyc(1, 4), i_, i_]
    wN2 = [cyc(1, 4), -i_, -i_]
    s = check_S_regular(inv_sl2_c4, witness=wS)
    nv = check_N_regular(inv_sl2_c4, wN)
    vv = check_very_N(inv_sl2_c4, nv, witnesses=[wN, wN2])
    assert vv.status == "witness-only"
    profile = RegularityProfile(s, nv, vv)
    rep = verify_coadjoint_theorem(inv_sl2_c4, 1, 4, profile, seed=1)
    assert rep.passed
    assert rep.generator_degrees == [2]
    assert rep.kostant_verdict == "free-generation-certified"
    assert rep.index_value == 1 == rep.index_expected


def test_invariant_transfer_check_smoke(grading_sl2):
    from takiffalg.contract import as_quasi, contract
    con = contract(as_quasi(grading_sl2))
    out = invariant_transfer_check(grading_sl2.algebra, grading_sl2, con, 4)
    assert out["ok"] and out["checked"]["adjoint"] > 0


# -- scenario harness ---------------------------------------------------------------


def test_bundled_scenarios_exist():
    for name in ("sl2_involution", "sl3_involution", "sl4_sympl_involution",
                 "takiff_sl2", "gl3_torus3", "gl4_torus2", "sp4_order4"):
        assert os.path.exists(scenario_path(name))


def test_sl2_scenario_passes():
    code, report = run_scenario(scenario_path("sl2_involution"))
    assert code == 0
    assert all(r["verdict"] == "pass" for r in report["results"])


def test_sp4_scenario_exit_zero_with_uncertified_very_N():
    code, report = run_scenario(scenario_path("sp4_order4"))
    assert code == 0
    very = [r for r in report["results"] if r["check"] == "very_N"][0]
    assert very["observed"]["status"] == "unknown"
    assert any("SL condition fails" in d
               for d in very["observed"]["details"])


def test_scenario_reports_reproducible():
    code1, rep1 = run_scenario(scenario_path("gl4_torus2"))
    code2, rep2 = run_scenario(scenario_path("gl4_torus2"))
    assert code1 == code2 == 0
    assert json.dumps(rep1, default=str) == json.dumps(rep2, default=str)


def test_scenario_expectation_failure_exits_1():
    data = json.load(open(scenario_path("sl2_involution")))
    data["checks"] = [{"kind": "block_dims",
                       "expect": {"dims": [2, 1]}}]
    with tempfile.NamedTemporaryFile("w", suffix=".json",
                                     delete=False) as fh:
        json.dump(data, fh)
        path = fh.name
    try:
        code, report = run_scenario(path)
        assert code == 1
        assert report["results"][0]["verdict"] == "fail"
    finally:
        os.unlink(path)


def test_scenario_hypothesis_miss_exits_2():
    data = json.load(open(scenario_path("sl2_involution")))
    data["checks"] = [{"kind": "adjoint_theorem",
                       "params": {"degree": 2, "witness": ["0", "1", "0"]},
                       "expect": {"passed": True}}]
    with tempfile.NamedTemporaryFile("w", suffix=".json",
                                     delete=False) as fh:
        json.dump(data, fh)
        path = fh.name
    try:
        code, report = run_scenario(path)
        assert code == 2
        assert report["results"][0]["verdict"] == "hypothesis-not-met"
    finally:
        os.unlink(path)


def test_scenario_parse_error_exits_3(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, report = run_scenario(str(bad))
    assert code == 3 and "error" in report
    code, _ = run_scenario(str(tmp_path / "missing.json"))
    assert code == 3


def test_scenario_unknown_check_exits_3(tmp_path):
    data = {"name": "x", "conductor": 2,
            "algebra": {"kind": "sl", "size": 2},
            "theta": {"type": "outer_involution",
                      "variant": "neg_transpose"},
            "checks": [{"kind": "nonsense", "expect": {}}]}
    p = tmp_path / "s.json"
    p.write_text(json.dumps(data))
    code, report = run_scenario(str(p))
    assert code == 3


def test_index_cross_check_against_rank_formula(grading_sl3):
    # contraction of the transpose grading has index n*rk = 2
    from takiffalg.contract import as_quasi, contract
    con = contract(as_quasi(grading_sl3))
    assert coadjoint_index(con, 5, 1).value == 2


def test_all_bundled_scenarios_exit_zero():
    for name in ("sl2_involution", "sl3_involution", "sl4_sympl_involution",
                 "takiff_sl2", "gl3_torus3", "gl4_torus2", "sp4_order4"):
        code, report = run_scenario(scenario_path(name))
        assert code == 0, (name, report)
        assert all(r["verdict"] == "pass" for r in report["results"]), name


def test_index_identity_level_plus_one(inv_sl3, sl2_c2):
    """Index of the level nk+1 fixed algebra: n rk(g) + rk(g0)."""
    from takiffalg.contract import contract, quasi_from_fixedpoints
    from takiffalg.takiff import takiff
    cq = contract(quasi_from_fixedpoints(inv_sl3))
    assert coadjoint_index(cq, 5, 1).value == 1 * 2 + 1
    level3 = takiff(sl2_c2, 3).underlying
    assert coadjoint_index(level3, 5, 1).value == 3


def test_adjoint_routes_agree_on_takiff_sl2(sl2_c2):
    """Level-2 consistency: the n=2 route on one copy and the n=1
    level-plus-one route hit the same algebra and the same series."""
    from takiffalg.verify import (verify_adjoint_theorem,
                                  verify_adjoint_theorem_plus)
    theta = identity_automorphism(sl2_c2)
    witness = [cyc(0, 2), cyc(1, 2), cyc(0, 2)]
    via_copies = verify_adjoint_theorem(theta, 2, 4, witness, seed=1)
    via_plus = verify_adjoint_theorem_plus(theta, 1, 4, witness,
                                           basic_degrees("sl", 2), seed=1)
    assert via_copies.passed and via_plus.passed
    assert via_copies.observed_series == via_plus.observed_series \
        == [1, 0, 2, 0, 3]
