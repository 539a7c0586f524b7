"""Shared planar state types, frame conversions and configuration."""

from dataclasses import dataclass, field
import numpy as np

LEFT = "left"
RIGHT = "right"


def rotation_matrix(theta):
    """Counter-clockwise planar rotation by theta (rad)."""
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


def rotate_to_world(v, theta):
    """Map a vector expressed in a frame with heading theta to world axes."""
    return rotation_matrix(theta) @ np.asarray(v, dtype=float)


def rotate_to_local(v, theta):
    """Express a world vector along the forward/lateral axes of heading theta."""
    return rotation_matrix(theta).T @ np.asarray(v, dtype=float)


def normalize_angle(a):
    """Wrap an angle to (-pi, pi]."""
    a = np.remainder(a + np.pi, 2.0 * np.pi)
    # remainder lands in [0, 2pi); shift, keeping +pi for the boundary
    if np.isscalar(a) or np.ndim(a) == 0:
        return a - np.pi if a != 0.0 else np.pi
    a = np.where(a == 0.0, 2.0 * np.pi, a)
    return a - np.pi


def angle_difference(a, b):
    """Shortest signed angle taking b to a."""
    return normalize_angle(a - b)


def other_side(side):
    return LEFT if side == RIGHT else RIGHT


def lateral_sign(side):
    """+1 when the stance foot is the right one (swing lands to its left)."""
    return 1.0 if side == RIGHT else -1.0


@dataclass
class PlanarState:
    """Planar point-mass state: position and velocity in world axes."""

    pos: np.ndarray
    vel: np.ndarray

    def __post_init__(self):
        self.pos = np.asarray(self.pos, dtype=float).reshape(2)
        self.vel = np.asarray(self.vel, dtype=float).reshape(2)

    def copy(self):
        return PlanarState(self.pos.copy(), self.vel.copy())

    def as_vector(self):
        return np.concatenate([self.pos, self.vel])

    @staticmethod
    def from_vector(x):
        x = np.asarray(x, dtype=float).reshape(4)
        return PlanarState(x[:2], x[2:])


@dataclass
class FootPose:
    """Stance foot anchor: ground position, heading and which foot it is."""

    pos: np.ndarray
    heading: float = 0.0
    side: str = LEFT

    def __post_init__(self):
        self.pos = np.asarray(self.pos, dtype=float).reshape(2)
        if self.side not in (LEFT, RIGHT):
            raise ValueError(f"side must be '{LEFT}' or '{RIGHT}', got {self.side!r}")

    def copy(self):
        return FootPose(self.pos.copy(), self.heading, self.side)


@dataclass
class GaitConfig:
    """Stepping geometry and timing.

    omega is the pendulum natural frequency sqrt(g / com_height); it is
    derived, not settable.
    """

    # 0.35 s steps: at the 0.7 m/s ceiling the stance-phase CoM sweep is
    # v * (T + 1/omega), which must stay inside forward_reach.  0.4 s sits
    # exactly on the bound; 0.35 buys ~7% margin without hurting slow gaits.
    step_duration: float = 0.35
    com_height: float = 0.9
    gravity: float = 9.81
    horizon: int = 3
    dt: float = 1e-3
    forward_reach: float = 0.5    # foothold shift bound along stance x
    lateral_reach: float = 0.4    # outer bound on lateral foothold shift
    lateral_clearance: float = 0.1  # inner bound, keeps the feet apart
    swing_height: float = 0.08
    omega: float = field(init=False)

    def __post_init__(self):
        if self.com_height <= 0 or self.gravity <= 0:
            raise ValueError("com_height and gravity must be positive")
        if self.step_duration <= 0 or self.dt <= 0:
            raise ValueError("step_duration and dt must be positive")
        if self.horizon < 1:
            raise ValueError("horizon must be at least 1")
        if not (0 < self.lateral_clearance < self.lateral_reach):
            raise ValueError("need 0 < lateral_clearance < lateral_reach")
        self.omega = np.sqrt(self.gravity / self.com_height)


@dataclass
class ComplianceParams:
    """Masses, diagonal spring/damper gains and the desired relative offset.

    Gains are stored as the diagonals of 2x2 matrices acting along the
    local forward/lateral axes.  k_goal/b_goal shape the goal rollout,
    k_hand/b_hand the hand-level force response, k_couple/b_couple the
    in-step coupling spring of the stepping model.

    m_plan is the virtual inertia of the goal admittance, deliberately
    much lighter than the robot itself.  The legs place the full body
    mass wherever the plan says, so the inertia the planned path
    presents to the object is a design quantity of the compliance
    preset, not the body mass; see the preset notes below.
    """

    m_robot: float = 45.0
    m_object: float = 15.0
    m_plan: float = 0.5
    k_goal: np.ndarray = None
    b_goal: np.ndarray = None
    k_hand: np.ndarray = None
    b_hand: np.ndarray = None
    k_couple: np.ndarray = None
    b_couple: np.ndarray = None
    offset: np.ndarray = None   # desired object-minus-robot offset, local frame
    kp_heading: float = 4.0
    kd_heading: float = 4.0
    kp_yaw: float = 6.0
    kd_yaw: float = 5.0
    # PD gains of the whole-body layer's pull toward the planned
    # reference trajectory, blended with the yield-to-hand acceleration.
    # Stiff on purpose: the hand spring acting on the body is worth up
    # to k_hand/m_robot ~ 11 s^-2 of competing stiffness, and the pull
    # must dominate it or the body sags off the reference toward the
    # object with a phase lag the hand spring then turns into force
    track_kp: float = 400.0
    track_kd: float = 40.0

    def __post_init__(self):
        def vec2(v, default):
            if v is None:
                v = default
            out = np.asarray(v, dtype=float)
            if out.ndim == 0:
                out = np.array([float(out), float(out)])
            return out.reshape(2).copy()

        if self.m_robot <= 0 or self.m_object <= 0 or self.m_plan <= 0:
            raise ValueError("masses must be positive")
        if self.track_kp < 0 or self.track_kd < 0:
            raise ValueError("tracking gains must be non-negative")
        self.k_goal = vec2(self.k_goal, (500.0, 500.0))
        self.b_goal = vec2(self.b_goal, (40.0, 40.0))
        self.k_hand = vec2(self.k_hand, (500.0, 500.0))
        self.b_hand = vec2(self.b_hand, (40.0, 40.0))
        self.k_couple = vec2(self.k_couple, (100.0, 100.0))
        self.b_couple = vec2(self.b_couple, (40.0, 40.0))
        self.offset = vec2(self.offset, (0.6, 0.0))

    def copy(self):
        return ComplianceParams(
            self.m_robot, self.m_object, self.m_plan,
            self.k_goal.copy(), self.b_goal.copy(),
            self.k_hand.copy(), self.b_hand.copy(),
            self.k_couple.copy(), self.b_couple.copy(),
            self.offset.copy(),
            self.kp_heading, self.kd_heading, self.kp_yaw, self.kd_yaw,
            self.track_kp, self.track_kd)


# Soft/stiff gain presets and the four goal/hand pairings used throughout:
# case 1 = stiff/stiff, 2 = soft/soft, 3 = stiff goal + soft hand,
# 4 = soft goal + stiff hand.
COMPLIANT_GAIN = (25.0, 10.0)
STIFF_GAIN = (500.0, 40.0)

# Virtual inertia paired with each goal preset.  Stiffness alone does
# not fix how well the planned path hugs the object: the admittance
# bandwidth sqrt(K/m) does, and a spring-damper reference tracking a
# moving target overshoots it by about m*w^2/K at drive frequency w, a
# displacement the hand spring turns directly into interaction force.
# A stiff stepping objective is therefore realized as a light, high
# bandwidth virtual body and a compliant one as a heavy, low bandwidth
# body; the bandwidth contrast is what the four-case comparison probes.
STIFF_PLAN_MASS = 0.5
COMPLIANT_PLAN_MASS = 5.0

_CASES = {
    1: (STIFF_GAIN, STIFF_GAIN),
    2: (COMPLIANT_GAIN, COMPLIANT_GAIN),
    3: (STIFF_GAIN, COMPLIANT_GAIN),
    4: (COMPLIANT_GAIN, STIFF_GAIN),
}


def compliance_case(case, **kw):
    """ComplianceParams for one of the four goal/hand gain pairings."""
    if case not in _CASES:
        raise ValueError(f"case must be 1..4, got {case}")
    (kg, bg), (kh, bh) = _CASES[case]
    m_plan = STIFF_PLAN_MASS if (kg, bg) == STIFF_GAIN \
        else COMPLIANT_PLAN_MASS
    return ComplianceParams(k_goal=(kg, kg), b_goal=(bg, bg),
                            k_hand=(kh, kh), b_hand=(bh, bh),
                            m_plan=m_plan, **kw)


@dataclass
class IntentEstimate:
    """Filtered estimate of the leader's desired object velocity and yaw."""

    vel: np.ndarray = None
    yaw: float = 0.0
    alpha: float = 0.995   # per-update retain factor for velocity
    beta: float = 0.995    # per-update retain factor for yaw

    def __post_init__(self):
        self.vel = (np.zeros(2) if self.vel is None
                    else np.asarray(self.vel, dtype=float).reshape(2).copy())
        if not (0.0 < self.alpha <= 1.0 and 0.0 < self.beta <= 1.0):
            raise ValueError("smoothing factors must lie in (0, 1]")

    def copy(self):
        return IntentEstimate(self.vel.copy(), self.yaw, self.alpha, self.beta)
