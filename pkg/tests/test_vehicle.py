import numpy as np
import pytest
import scipy.optimize

from auvpilot import quatmath as qm
from auvpilot import vehicle as vh

RNG = np.random.default_rng(7)


@pytest.fixture(scope="module")
def params():
    return vh.default_params()


def rest_state(q=None, pos=(0, 0, 0), angles=(0.0, 0.0)):
    s = np.zeros(9)
    s[0:4] = [1.0, 0, 0, 0] if q is None else q
    s[4:7] = pos
    s[7:9] = angles
    return np.concatenate([s, np.zeros(8)])


def zero_buoyancy_lever(params):
    """Copy of params with collocated gravity/buoyancy centers."""
    from dataclasses import replace
    return replace(params, center_of_buoyancy=params.center_of_gravity.copy())


class TestCoriolis:
    def test_zero_velocity(self, params):
        np.testing.assert_array_equal(vh.coriolis_matrix(params, np.zeros(8)),
                                      np.zeros((8, 8)))

    def test_skew_symmetry(self, params):
        for _ in range(100):
            v = RNG.standard_normal(8) * 2.0
            C = vh.coriolis_matrix(params, v)
            np.testing.assert_allclose(C + C.T, np.zeros((8, 8)), atol=1e-10)

    def test_power_neutral(self, params):
        # v' C(v) v = 0 over 1000 random velocities.
        for _ in range(1000):
            v = RNG.standard_normal(8) * 3.0
            C = vh.coriolis_matrix(params, v)
            assert abs(v @ C @ v) < 1e-10

    def test_lateral_coupling_term(self, params):
        # Hand-expanded 6-DoF Kirchhoff form for diagonal M: sway force m*u*wz.
        m = params.mass_matrix[3, 3]
        u, wz = 1.3, 0.8
        v = np.zeros(8)
        v[2], v[3] = wz, u
        Cv = vh.coriolis_matrix(params, v) @ v
        assert abs(Cv[4] - m * u * wz) < 1e-12


class TestDamping:
    def test_zero(self, params):
        np.testing.assert_array_equal(vh.damping_force(params, np.zeros(8)), np.zeros(8))

    def test_quadratic_surge(self, params):
        # Pure quadratic surge drag: D_q * |v| * v = 5 * |2| * 2 = 20 N.
        from dataclasses import replace
        p = replace(params, linear_damping=np.zeros((8, 8)),
                    quadratic_damping=np.array([0, 0, 0, 5.0, 0, 0, 0, 0]))
        v = np.zeros(8)
        v[3] = 2.0
        f = vh.damping_force(p, v)
        assert abs(f[3] - 20.0) < 1e-12
        np.testing.assert_array_equal(np.delete(f, 3), np.zeros(7))

    def test_odd_function(self, params):
        for _ in range(50):
            v = RNG.standard_normal(8)
            np.testing.assert_allclose(vh.damping_force(params, -v),
                                       -vh.damping_force(params, v), atol=1e-12)


class TestRestoring:
    def test_collocated_centers(self, params):
        p = zero_buoyancy_lever(params)
        for _ in range(50):
            q = qm.quat_normalize(RNG.standard_normal(4))
            np.testing.assert_allclose(vh.restoring_wrench(p, q), np.zeros(8),
                                       atol=1e-12)

    def test_level_aligned_levers(self, params):
        # c_g below c_b on the body z-axis, level attitude: both lever arms are
        # parallel to gravity, zero torque.
        np.testing.assert_allclose(vh.restoring_wrench(params, [1.0, 0, 0, 0]),
                                   np.zeros(8), atol=1e-12)

    def test_vertical_pose_max_torque(self, params):
        # Pitched 90 deg: torque magnitude = separation * weight.
        d = np.linalg.norm(params.center_of_buoyancy - params.center_of_gravity)
        W = params.weight_force
        q = qm.quat_from_axis_angle([0, 1, 0], -np.pi / 2)  # nose up
        r = vh.restoring_wrench(params, q)
        assert abs(np.linalg.norm(r[0:3]) - d * W) < 1e-9
        np.testing.assert_array_equal(r[3:], np.zeros(5))

    def test_zero_force_components_random_attitudes(self, params):
        for _ in range(100):
            q = qm.quat_normalize(RNG.standard_normal(4))
            r = vh.restoring_wrench(params, q)
            np.testing.assert_array_equal(r[3:6], np.zeros(3))
            np.testing.assert_array_equal(r[6:], np.zeros(2))


class TestThrusterJacobian:
    def test_axial_thrust_pure_surge(self, params):
        # Offset is parallel to the thrust line: no lever torque.
        J = vh.thruster_jacobian(params, rest_state())
        f_gen = J @ vh.thrust_wrench([10.0, 0.0, 0.0])
        np.testing.assert_allclose(f_gen[3:6], [10.0, 0, 0], atol=1e-12)
        np.testing.assert_allclose(f_gen[0:3], np.zeros(3), atol=1e-12)
        np.testing.assert_array_equal(f_gen[6:], np.zeros(2))

    def test_pan_90_sway_plus_yaw(self, params):
        x = rest_state(angles=(np.pi / 2, 0.0))
        J = vh.thruster_jacobian(params, x)
        f_gen = J @ vh.thrust_wrench([10.0, 0.0, 0.0])
        L = np.linalg.norm(params.thruster_offset)
        np.testing.assert_allclose(f_gen[3:6], [0.0, 10.0, 0.0], atol=1e-12)
        assert abs(abs(f_gen[2]) - 10.0 * L) < 1e-12  # yaw torque magnitude
    def test_joint_torque_unit_gain(self, params):
        for psi, phi in [(0.0, 0.0), (0.4, -0.3), (-0.7, 0.5)]:
            J = vh.thruster_jacobian(params, rest_state(angles=(psi, phi)))
            f_gen = J @ vh.thrust_wrench([0.0, 2.5, -1.5])
            assert f_gen[6] == 2.5 and f_gen[7] == -1.5
            np.testing.assert_allclose(f_gen[0:6], np.zeros(6), atol=1e-12)


class TestForwardDynamics:
    def test_equilibrium(self, params):
        p = zero_buoyancy_lever(params)
        vdot = vh.forward_dynamics(p, rest_state(), np.zeros(3))
        np.testing.assert_allclose(vdot, np.zeros(8), atol=1e-14)

    def test_pure_surge_acceleration(self, params):
        f = 42.0
        vdot = vh.forward_dynamics(params, rest_state(), [f, 0, 0])
        np.testing.assert_allclose(vdot[3], f / params.mass_matrix[3, 3], rtol=1e-12)
        np.testing.assert_allclose(np.delete(vdot, 3), np.zeros(7), atol=1e-12)

    def test_residual_of_mass_solve(self, params):
        x = np.concatenate([rest_state()[:9], RNG.standard_normal(8)])
        u = RNG.standard_normal(3) * 10
        vdot = vh.forward_dynamics(params, x, u)
        rhs = (vh.thruster_jacobian(params, x[:9]) @ vh.thrust_wrench(u)
               - vh.coriolis_matrix(params, x[9:]) @ x[9:]
               - vh.damping_force(params, x[9:])
               - vh.restoring_wrench(params, x[0:4]))
        res = np.linalg.norm(params.mass_matrix @ vdot - rhs)
        assert res <= 1e-10 * max(np.linalg.norm(rhs), 1.0)

    def test_translation_invariance(self, params):
        x1 = rest_state(pos=(0, 0, 0))
        x2 = rest_state(pos=(13.0, -4.0, 2.5))
        x1[9:] = x2[9:] = RNG.standard_normal(8)
        u = [25.0, 0.5, -0.5]
        np.testing.assert_array_equal(vh.forward_dynamics(params, x1, u),
                                      vh.forward_dynamics(params, x2, u))

    def test_passivity_power_balance(self, params):
        # With u = 0 and collocated centers, d/dt(0.5 v'Mv) = -v'D(v)v <= 0.
        p = zero_buoyancy_lever(params)
        for _ in range(100):
            x = rest_state()
            x[9:] = RNG.standard_normal(8)
            vdot = vh.forward_dynamics(p, x, np.zeros(3))
            v = x[9:]
            power = v @ p.mass_matrix @ vdot
            assert power <= 1e-9
            np.testing.assert_allclose(power, -v @ vh.damping_force(p, v), atol=1e-8)

    def test_singular_mass_error(self, params):
        from dataclasses import replace
        with pytest.raises(vh.SingularMassError):
            replace(params, rigid_mass_matrix=np.zeros((8, 8)),
                    added_mass_matrix=np.zeros((8, 8)))


class TestStateDerivative:
    def test_equilibrium(self, params):
        p = zero_buoyancy_lever(params)
        np.testing.assert_allclose(vh.state_derivative(p, rest_state(), np.zeros(3)),
                                   np.zeros(17), atol=1e-14)

    def test_identity_attitude_surge(self, params):
        x = rest_state()
        x[12] = 1.7
        xdot = vh.state_derivative(params, x, np.zeros(3))
        assert abs(xdot[4] - 1.7) < 1e-12 and abs(xdot[5]) < 1e-12

    def test_yawed_attitude_surge(self, params):
        x = rest_state(q=qm.quat_from_axis_angle([0, 0, 1], np.pi / 2))
        x[12] = 1.7
        xdot = vh.state_derivative(params, x, np.zeros(3))
        assert abs(xdot[5] - 1.7) < 1e-12 and abs(xdot[4]) < 1e-12

    def test_angle_rates_passthrough(self, params):
        x = rest_state()
        x[15], x[16] = 0.2, -0.3
        xdot = vh.state_derivative(params, x, np.zeros(3))
        assert xdot[7] == 0.2 and xdot[8] == -0.3

    def test_batch_matches_single(self, params):
        X = np.stack([np.concatenate([qm.quat_normalize(RNG.standard_normal(4)),
                                      RNG.standard_normal(3),
                                      RNG.uniform(-0.7, 0.7, 2),
                                      RNG.standard_normal(8)])
                      for _ in range(25)])
        U = RNG.standard_normal((25, 3)) * 20
        batch = vh.state_derivative_batch(params, X, U)
        for i in range(25):
            np.testing.assert_allclose(batch[i], vh.state_derivative(params, X[i], U[i]),
                                       atol=1e-12)


class TestLinkage:
    def test_neutral_pose_nominal_lengths(self, params):
        l1, l2 = vh.linkage_inverse_kinematics(params, 0.0, 0.0)
        lg = params.linkage
        exp1 = np.linalg.norm(lg.pivot + lg.cradle_left - lg.body_left)
        exp2 = np.linalg.norm(lg.pivot + lg.cradle_right - lg.body_right)
        assert abs(l1 - exp1) < 1e-12 and abs(l2 - exp2) < 1e-12

    def test_mirror_symmetry_swaps_actuators(self, params):
        for _ in range(20):
            psi = RNG.uniform(-0.7, 0.7)
            phi = RNG.uniform(-0.7, 0.7)
            l1, l2 = vh.linkage_inverse_kinematics(params, psi, phi)
            m1, m2 = vh.linkage_inverse_kinematics(params, -psi, phi)
            assert abs(l1 - m2) < 1e-12 and abs(l2 - m1) < 1e-12

    def test_round_trip_via_root_finding(self, params):
        # Numerically invert the map with an independent root-finding oracle.
        lo = (params.psi_limits[0], params.phi_limits[0])
        hi = (params.psi_limits[1], params.phi_limits[1])
        for _ in range(20):
            psi = RNG.uniform(lo[0], hi[0])
            phi = RNG.uniform(lo[1], hi[1])
            target = np.array(vh.linkage_inverse_kinematics(params, psi, phi))

            def residual(a):
                return np.array(vh.linkage_inverse_kinematics(params, a[0], a[1])) - target

            sol = scipy.optimize.root(residual, x0=[0.0, 0.0], method="hybr",
                                      options={"xtol": 1e-12})
            np.testing.assert_allclose(sol.x, [psi, phi], atol=1e-8)

    def test_stroke_violation_raises(self, params):
        from dataclasses import replace
        lg = params.linkage
        tight = replace(params, linkage=vh.LinkageGeometry(
            pivot=lg.pivot, cradle_left=lg.cradle_left, cradle_right=lg.cradle_right,
            body_left=lg.body_left, body_right=lg.body_right,
            stroke_min=0.0, stroke_max=1e-3))
        with pytest.raises(vh.UnreachablePoseError):
            vh.linkage_inverse_kinematics(tight, 0.0, 0.0)


class TestConfigIO:
    def test_round_trip(self, params, tmp_path):
        path = tmp_path / "vehicle.yaml"
        vh.save_params(path, params)
        loaded = vh.load_params(path)
        np.testing.assert_array_equal(loaded.mass_matrix, params.mass_matrix)
        np.testing.assert_array_equal(loaded.quadratic_damping, params.quadratic_damping)
        assert loaded.force_min == params.force_min
        assert loaded.psi_limits == params.psi_limits
        np.testing.assert_array_equal(loaded.linkage.body_left, params.linkage.body_left)

    def test_missing_schema_version(self, params, tmp_path):
        import yaml
        doc = vh._params_to_dict(params)
        del doc["schema_version"]
        path = tmp_path / "bad.yaml"
        path.write_text(yaml.safe_dump(doc))
        with pytest.raises(ValueError, match="schema_version"):
            vh.load_params(path)

    def test_force_limit_invariant(self, params):
        from dataclasses import replace
        with pytest.raises(ValueError, match="force limits"):
            replace(params, force_min=5.0)

    def test_angle_interval_invariant(self, params):
        from dataclasses import replace
        with pytest.raises(ValueError, match="contain zero"):
            replace(params, psi_limits=(0.1, 0.5))
