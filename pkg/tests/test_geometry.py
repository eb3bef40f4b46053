import itertools
import math
import random
from fractions import Fraction as F

import numpy as np
import pytest
from scipy.optimize import linprog, minimize_scalar

from condprob import (
    CPTable,
    ConvergenceError,
    FiberProblem,
    InfeasibleError,
    InputError,
    JointDistribution,
    VarId,
    conditionals_from_joint,
    delta_E,
    delta_E_hrep,
    delta_E_vertices,
    fiber_max_entropy,
    make_event_family,
    matus_W,
    mconv_vertices,
    moment_nu,
    simplex_moment,
    solve_fiber,
    submodular_w,
    universal_gb,
)
from condprob.geometry import (
    dual_gradient,
    dual_hessian,
    dual_objective,
    hrep_vertices,
    is_submodular,
    kl_to_uniform,
    mconv_points,
    pairs_family,
    project_v,
    softmax_table,
)

from helpers import CONNECTED, family, random_joint

TRIPLE_AND_PAIR = make_event_family(3, [[1, 2, 3], [1, 2]])


def perms(t):
    return set(itertools.permutations(t))


class TestSubmodular:
    def test_values(self, all_subsets_of_3):
        assert submodular_w(all_subsets_of_3, {1}) == 3
        assert submodular_w(all_subsets_of_3, set()) == 0
        assert submodular_w(all_subsets_of_3, {1, 2, 3}) == 4

    @pytest.mark.parametrize("name", sorted(CONNECTED))
    def test_submodular(self, name):
        assert is_submodular(family(name))

    def test_random_families_submodular(self):
        rng = random.Random(0)
        for _ in range(10):
            m = 5
            events = {tuple(sorted(rng.sample(range(1, m + 1), rng.randint(2, m)))) for _ in range(4)}
            assert is_submodular(make_event_family(m, [list(e) for e in events]))


class TestPolytopes:
    def test_all_subsets(self, all_subsets_of_3):
        assert set(delta_E_vertices(all_subsets_of_3).vertices) == perms((3, 1, 0))

    def test_pairs(self, pairs_of_3):
        assert set(delta_E_vertices(pairs_of_3).vertices) == perms((2, 1, 0))
        h = delta_E_hrep(pairs_of_3)
        assert h.equality_sum == 3
        bounds = dict(h.inequalities)
        assert all(bounds[(i,)] == 2 for i in (1, 2, 3))
        assert all(bounds[s] == 3 for s in itertools.combinations((1, 2, 3), 2))

    def test_single_event_simplex(self):
        fam = make_event_family(3, [[1, 2, 3]])
        assert set(delta_E_vertices(fam).vertices) == perms((1, 0, 0))
        h = delta_E_hrep(fam)
        assert h.equality_sum == 1 and all(b == 1 for _, b in h.inequalities)

    @pytest.mark.parametrize("name", sorted(CONNECTED))
    def test_vertices_satisfy_hrep(self, name):
        fam = family(name)
        poly = delta_E(fam)
        for vert in poly.vertices:
            assert poly.satisfies_hrep(vert)
            assert sum(vert) == len(fam.events)

    @pytest.mark.parametrize("name", sorted(CONNECTED))
    def test_exact_hrep_extreme_points(self, name):
        poly = delta_E(family(name))
        assert set(hrep_vertices(poly)) == {tuple(F(x) for x in v) for v in poly.vertices}

    @pytest.mark.parametrize("name", sorted(CONNECTED))
    def test_lp_cross_check_scipy(self, name):
        poly = delta_E(family(name))
        m = poly.dim_ambient
        a_ub = [[1 if j + 1 in s else 0 for j in range(m)] for s, _ in poly.inequalities]
        b_ub = [b for _, b in poly.inequalities]
        rng = random.Random(name)
        for _ in range(40):
            c = [rng.randint(-10, 10) for _ in range(m)]
            res = linprog([-x for x in c], A_ub=a_ub, b_ub=b_ub, A_eq=[[1] * m], b_eq=[poly.equality_sum],
                          bounds=[(None, None)] * m, method="highs")
            assert res.status == 0
            assert abs(-res.fun - poly.max_over_vertices(c)) < 1e-7

    @pytest.mark.parametrize("name", sorted(CONNECTED))
    def test_mconv_projection(self, name):
        fam = family(name)
        lifted = mconv_vertices(fam)
        k = len(fam.support)
        assert all(v[k:] == (1,) * len(fam.events) for v in lifted.vertices)
        assert {project_v(fam, v) for v in lifted.vertices} == set(delta_E_vertices(fam).vertices)
        # every point-mass choice lands in Delta_E, and the hull's vertices are among them
        pts = mconv_points(fam)
        assert set(lifted.vertices) <= set(pts)
        h = delta_E_hrep(fam)
        assert all(h.satisfies_hrep(project_v(fam, p)) for p in pts)

    def test_order_guard(self):
        from condprob import LimitError

        with pytest.raises(LimitError):
            delta_E_vertices(make_event_family(11, [list(range(1, 12))]))


class TestMoments:
    def test_nu_uniform(self):
        t = CPTable.from_events({(1, 2, 3): ["1/3"] * 3, (1, 2): ["1/2"] * 2})
        nu = moment_nu(TRIPLE_AND_PAIR, t)
        assert nu == (F(5, 6), F(5, 6), F(1, 3), 1, 1)

    def test_nu_sign_and_point_mass(self, all_subsets_of_3):
        rng = random.Random(0)
        z = {x: F(rng.randint(-9, 9) or 1, 7) for x in all_subsets_of_3.variables}
        assert moment_nu(all_subsets_of_3, z) == moment_nu(all_subsets_of_3, {k: -x for k, x in z.items()})
        point = {x: (1 if x.i == max(x.event) else 0) for x in all_subsets_of_3.variables}
        assert project_v(all_subsets_of_3, moment_nu(all_subsets_of_3, point)) in delta_E_vertices(all_subsets_of_3).vertices

    def test_nu_in_polytope(self, any_connected):
        rng = random.Random(1)
        h = delta_E_hrep(any_connected)
        for _ in range(20):
            z = {x: F(rng.randint(1, 9)) for x in any_connected.variables}
            nu = moment_nu(any_connected, z)
            assert h.satisfies_hrep(project_v(any_connected, nu))
            assert nu[len(any_connected.support):] == (1,) * len(any_connected.events)

    def test_nu_zero_event(self):
        with pytest.raises(InputError):
            moment_nu(TRIPLE_AND_PAIR, {x: 0 for x in TRIPLE_AND_PAIR.variables})

    def test_matus_examples(self):
        fam = pairs_family(3)
        uniform = CPTable({x: F(1, 2) for x in fam.variables})
        assert matus_W(uniform, 3) == (1, 1, 1)
        t = conditionals_from_joint(JointDistribution((F(1, 2), F(1, 4), F(1, 4))), fam)
        assert matus_W(t, 3) == (F(4, 3), F(5, 6), F(5, 6))
        edge = CPTable.from_events({(1, 2): [1, 0], (1, 3): [1, 0], (2, 3): ["1/2", "1/2"]})
        assert matus_W(edge, 3) == (2, F(1, 2), F(1, 2))

    def test_matus_incomplete(self):
        with pytest.raises(InputError):
            matus_W(CPTable.from_events({(1, 2): ["1/2", "1/2"]}), 3)

    def test_simplex_moment(self):
        assert simplex_moment((3, 1, 0)) == (F(3, 4), F(1, 4), 0)
        assert simplex_moment((-1, 1, 0)) == (F(1, 2), F(1, 2), 0)
        p = (F(1, 5), F(3, 5), F(1, 5))
        assert simplex_moment(p) == p
        with pytest.raises(InputError):
            simplex_moment((0, 0))


class TestFiber:
    def test_symmetric_target(self):
        t = fiber_max_entropy(FiberProblem(TRIPLE_AND_PAIR, (5 / 6, 5 / 6, 1 / 3)))
        assert all(abs(t[x] - 1 / len(x.event)) < 1e-12 for x in TRIPLE_AND_PAIR.variables)

    def test_vertex_target(self):
        t = fiber_max_entropy(FiberProblem(TRIPLE_AND_PAIR, (2, 0, 0)))
        assert t[VarId(1, (1, 2))] == 1.0 and t[VarId(1, (1, 2, 3))] == 1.0

    def test_against_scalar_oracle(self):
        b = (1.2, 0.5, 0.3)
        sol = solve_fiber(FiberProblem(TRIPLE_AND_PAIR, b))
        assert sol.residual <= 1e-10

        def table(c):
            return CPTable.from_events({(1, 2): [c, 1 - c], (1, 2, 3): [b[0] - c, c - b[1], b[2]]}, mode="float")

        best = minimize_scalar(lambda c: kl_to_uniform(TRIPLE_AND_PAIR, table(c)),
                               bounds=(0.5, 1.0), method="bounded", options={"xatol": 1e-12})
        assert abs(sol.table[VarId(1, (1, 2))] - best.x) < 1e-6
        ours = kl_to_uniform(TRIPLE_AND_PAIR, sol.table)
        rng = np.random.default_rng(0)
        for c in rng.uniform(0.5, 1.0, 10_000):
            assert ours <= kl_to_uniform(TRIPLE_AND_PAIR, table(c)) + 1e-12

    def test_infeasible(self):
        with pytest.raises(InfeasibleError):
            solve_fiber(FiberProblem(TRIPLE_AND_PAIR, (2.5, 0, -0.5)))
        with pytest.raises(InfeasibleError):
            solve_fiber(FiberProblem(TRIPLE_AND_PAIR, (1, 1, 1)))

    def test_bad_problem(self):
        with pytest.raises(InputError):
            FiberProblem(TRIPLE_AND_PAIR, (1, 1))

    def test_iteration_cap(self):
        with pytest.raises(ConvergenceError):
            solve_fiber(FiberProblem(TRIPLE_AND_PAIR, (1.2, 0.5, 0.3), max_iter=1))

    def test_monotone_objective_and_psd(self, any_connected):
        rng = np.random.default_rng(2)
        theta = rng.uniform(-3, 3, any_connected.m)
        target = project_v(any_connected, moment_nu(any_connected, softmax_table(any_connected, theta)))
        sol = solve_fiber(FiberProblem(any_connected, target))
        trace = sol.objective_trace
        assert all(b <= a + 1e-12 for a, b in zip(trace, trace[1:]))
        h = dual_hessian(any_connected, theta)
        assert np.linalg.eigvalsh(h).min() > -1e-12

    def test_gradient_finite_difference(self, any_connected):
        rng = np.random.default_rng(3)
        b = np.array(project_v(any_connected, moment_nu(any_connected, softmax_table(any_connected, rng.uniform(-3, 3, any_connected.m)))))
        for _ in range(5):
            theta = rng.uniform(-3, 3, any_connected.m)
            g = dual_gradient(any_connected, theta, b)
            eps = 1e-6
            fd = np.array([(dual_objective(any_connected, theta + eps * e, b)
                            - dual_objective(any_connected, theta - eps * e, b)) / (2 * eps)
                           for e in np.eye(any_connected.m)])
            assert np.max(np.abs(fd - g)) <= 1e-6 * max(1.0, np.max(np.abs(g)))

    def test_boundary_face(self, two_pairs_and_triple):
        # x_1 + x_2 = w({1,2}) is tight: no mass of 123 on 3, and 23 puts everything on 2
        sol = solve_fiber(FiberProblem(two_pairs_and_triple, (1.5, 1.5, 0.0)))
        t = sol.table
        assert t[VarId(3, (1, 2, 3))] == 0 and t[VarId(3, (2, 3))] == 0
        assert sol.residual <= 1e-10
        for b in universal_gb(two_pairs_and_triple):
            assert abs(b.evaluate(t.values)) <= 1e-10


def test_matus_interior_sample():
    rng = random.Random(4)
    for m in (3, 4):
        fam = pairs_family(m)
        h = delta_E_hrep(fam)
        for _ in range(50):
            w = matus_W(conditionals_from_joint(random_joint(m, rng), fam), m)
            assert h.satisfies_hrep(w) and sum(w) == math.comb(m, 2)


def test_fiber_converges_below_objective_rounding():
    # the final Newton steps change the objective by less than one ulp
    fam = family("pairs_of_3")
    theta = (1.97388282, 1.56641864, 1.24632466)
    p = softmax_table(fam, theta)
    sol = solve_fiber(FiberProblem(fam, project_v(fam, moment_nu(fam, p))))
    assert sol.residual <= 1e-10
    assert max(abs(sol.table[x] - p[x]) for x in fam.variables) < 1e-9
