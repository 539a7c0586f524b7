import numpy as np

from cotransport import (ComplianceParams, FootPose, GaitConfig,
                         IntentEstimate, PlanarState, rotate_to_local)
from cotransport.ilip import (ilip_accel, ilip_step_map, ilip_step_matrices,
                              object_step_map, update_intent)

from oracles import local_flow_oracle, rk4_flow

CFG = GaitConfig()

# Frozen reference values for the generic heading-0.9 configuration,
# computed with the closed-form characteristic-root oracle and confirmed
# against batched RK4 at dt = 1e-5 (agreement 2.4e-14).
GEN_POS0 = np.array([0.10, -0.05])
GEN_VEL0 = np.array([0.20, 0.10])
GEN_FOOT = np.array([0.00, -0.12])
GEN_THETA = 0.90
GEN_OBJ = np.array([0.72, 0.15])
GEN_VOBJ = np.array([0.30, 0.05])
GEN_PARAMS = ComplianceParams(k_couple=(120.0, 80.0), b_couple=(30.0, 25.0))
ILIP_STEP_POS = np.array([0.2837983069069267, 0.004588878581127078])
ILIP_STEP_VEL = np.array([0.9295581782647745, 0.2323020433048352])
ILIP_ACCEL = np.array([1.554303007917725, 0.2168898478748017])


def test_update_intent_identity_when_alpha_one():
    est = IntentEstimate(vel=(0.2, 0.1), yaw=0.3, alpha=1.0, beta=1.0)
    out = update_intent(est, (5.0, -2.0), 2.0)
    assert np.allclose(out.vel, (0.2, 0.1))
    assert np.isclose(out.yaw, 0.3)


def test_update_intent_blend():
    est = IntentEstimate(vel=(0.0, 0.0), yaw=0.0, alpha=0.9, beta=0.8)
    out = update_intent(est, (1.0, 2.0), 1.0)
    assert np.allclose(out.vel, (0.1, 0.2))
    assert np.isclose(out.yaw, 0.2)


def test_update_intent_shortest_arc():
    # blending across the wrap must go the short way
    est = IntentEstimate(yaw=np.pi - 0.05, beta=0.5)
    out = update_intent(est, np.zeros(2), -np.pi + 0.05)
    assert np.isclose(abs(out.yaw), np.pi, atol=0.06)


def test_update_intent_convergence():
    est = IntentEstimate(alpha=0.9, beta=0.9)
    for _ in range(300):
        est = update_intent(est, (0.4, -0.2), 0.7)
    assert np.allclose(est.vel, (0.4, -0.2), atol=1e-9)
    assert np.isclose(est.yaw, 0.7, atol=1e-9)


def test_ilip_accel_equilibrium():
    params = ComplianceParams()
    foot = FootPose((0.0, 0.0))
    robot = PlanarState((0.0, 0.0), (0.0, 0.0))
    obj = params.offset.copy()   # heading 0: world offset == local offset
    acc = ilip_accel(robot, foot, obj, np.zeros(2), params, CFG)
    assert np.allclose(acc, 0.0, atol=1e-12)


def test_ilip_accel_frozen_generic():
    foot = FootPose(GEN_FOOT, heading=GEN_THETA)
    robot = PlanarState(GEN_POS0, GEN_VEL0)
    acc = ilip_accel(robot, foot, GEN_OBJ, GEN_VOBJ, GEN_PARAMS, CFG)
    assert np.allclose(acc, ILIP_ACCEL, atol=1e-12)


def test_ilip_accel_frame_equivariance():
    # translating the whole scene leaves the spring part unchanged and
    # shifts only the pendulum term
    rng = np.random.default_rng(3)
    for _ in range(50):
        shift = rng.normal(size=2)
        foot = FootPose(GEN_FOOT, heading=GEN_THETA)
        robot = PlanarState(GEN_POS0, GEN_VEL0)
        a0 = ilip_accel(robot, foot, GEN_OBJ, GEN_VOBJ, GEN_PARAMS, CFG)
        foot2 = FootPose(GEN_FOOT + shift, heading=GEN_THETA)
        robot2 = PlanarState(GEN_POS0 + shift, GEN_VEL0)
        a1 = ilip_accel(robot2, foot2, GEN_OBJ + shift, GEN_VOBJ,
                        GEN_PARAMS, CFG)
        assert np.allclose(a0, a1, atol=1e-10)


def test_step_map_frozen_generic():
    foot = FootPose(GEN_FOOT, heading=GEN_THETA)
    robot = PlanarState(GEN_POS0, GEN_VEL0)
    out = ilip_step_map(robot, foot, GEN_OBJ, GEN_VOBJ, GEN_PARAMS, CFG)
    assert np.allclose(out.pos, ILIP_STEP_POS, atol=1e-11)
    assert np.allclose(out.vel, ILIP_STEP_VEL, atol=1e-11)


def test_step_map_matches_closed_form_randomized():
    rng = np.random.default_rng(42)
    for _ in range(30):
        theta = rng.uniform(-np.pi, np.pi)
        params = ComplianceParams(
            k_couple=rng.uniform(5.0, 600.0, size=2),
            b_couple=rng.uniform(0.0, 50.0, size=2),
            offset=rng.normal(scale=0.5, size=2))
        robot = PlanarState(rng.normal(scale=0.5, size=2),
                            rng.normal(scale=0.5, size=2))
        foot = FootPose(rng.normal(scale=0.3, size=2), heading=theta)
        obj = rng.normal(scale=0.8, size=2)
        vobj = rng.normal(scale=0.4, size=2)
        out = ilip_step_map(robot, foot, obj, vobj, params, CFG)
        p_ref, v_ref = local_flow_oracle(
            robot.pos, robot.vel, theta, foot.pos, obj, vobj,
            params.k_couple, params.b_couple, params.offset,
            params.m_robot, CFG.omega ** 2, CFG.step_duration)
        assert np.allclose(out.pos, p_ref, atol=1e-9)
        assert np.allclose(out.vel, v_ref, atol=1e-9)


def test_step_map_matches_rk4_spotcheck():
    foot = FootPose(GEN_FOOT, heading=GEN_THETA)
    robot = PlanarState(GEN_POS0, GEN_VEL0)
    out = ilip_step_map(robot, foot, GEN_OBJ, GEN_VOBJ, GEN_PARAMS, CFG)
    p_ref, v_ref = rk4_flow(GEN_POS0[None], GEN_VEL0[None],
                            CFG.step_duration, GEN_FOOT[None],
                            np.array([GEN_THETA]), GEN_OBJ[None],
                            GEN_VOBJ[None], GEN_PARAMS.k_couple[None],
                            GEN_PARAMS.b_couple[None],
                            GEN_PARAMS.offset[None], 45.0, CFG.omega ** 2,
                            dt=1e-4)
    assert np.allclose(out.pos, p_ref[0], atol=1e-7)
    assert np.allclose(out.vel, v_ref[0], atol=1e-7)


def test_step_matrices_reproduce_step_map():
    rng = np.random.default_rng(11)
    for _ in range(20):
        theta = rng.uniform(-np.pi, np.pi)
        params = ComplianceParams(k_couple=rng.uniform(10, 400, size=2),
                                  b_couple=rng.uniform(1, 40, size=2))
        obj = rng.normal(size=2)
        vobj = rng.normal(scale=0.3, size=2)
        A, B, c = ilip_step_matrices(theta, obj, vobj, params, CFG)
        robot = PlanarState(rng.normal(size=2), rng.normal(size=2))
        foot = FootPose(rng.normal(size=2), heading=theta)
        direct = ilip_step_map(robot, foot, obj, vobj, params, CFG)
        via = A @ robot.as_vector() + B @ foot.pos + c
        assert np.allclose(direct.as_vector(), via, atol=1e-12)


def test_zero_spring_reduces_to_pure_pendulum():
    # with no coupling the step map is the classic pendulum flow
    params = ComplianceParams(k_couple=(0.0, 0.0), b_couple=(0.0, 0.0))
    foot = FootPose((0.05, -0.1))
    robot = PlanarState((0.2, 0.0), (0.1, 0.3))
    out = ilip_step_map(robot, foot, np.zeros(2), np.zeros(2), params, CFG)
    w = CFG.omega
    T = CFG.step_duration
    rel0 = robot.pos - foot.pos
    pos = foot.pos + rel0 * np.cosh(w * T) + robot.vel / w * np.sinh(w * T)
    vel = rel0 * w * np.sinh(w * T) + robot.vel * np.cosh(w * T)
    assert np.allclose(out.pos, pos, atol=1e-10)
    assert np.allclose(out.vel, vel, atol=1e-10)


def test_object_step_map():
    obj = PlanarState((1.0, 2.0), (0.5, -0.5))
    out = object_step_map(obj, (0.3, 0.1), CFG)
    T = CFG.step_duration
    assert np.allclose(out.pos, (1.0 + 0.3 * T, 2.0 + 0.1 * T))
    assert np.allclose(out.vel, (0.3, 0.1))


def test_separation_equilibrium_is_invariant():
    # starting on the offset manifold moving with the object, only the
    # pendulum term acts; with the foot under the CoM nothing moves
    params = ComplianceParams()
    foot = FootPose((0.0, 0.0))
    robot = PlanarState((0.0, 0.0), (0.0, 0.0))
    obj = rotate_to_local(params.offset, 0.0)
    out = ilip_step_map(robot, foot, obj, np.zeros(2), params, CFG)
    assert np.allclose(out.pos, 0.0, atol=1e-12)
    assert np.allclose(out.vel, 0.0, atol=1e-12)
