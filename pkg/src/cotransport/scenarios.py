"""Scenario files and the scripted leader.

A scenario is one INI file: run length, compliance case, object start
pose, the leader's servo gains and the reference trajectory it drags the
object along.  Unknown sections or keys fail the parse so typos cannot
silently change an experiment.
"""

import configparser
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .core import compliance_case, normalize_angle


@dataclass
class LeaderModel:
    """PD servo pulling the object along the reference, with saturation."""

    kp: float = 300.0
    kd: float = 80.0
    # yaw gains sized so the leader can overpower the follower's bounded
    # grip moment and actually twist the box during turning tasks
    yaw_kp: float = 150.0
    yaw_kd: float = 20.0
    saturation: float = 150.0        # force magnitude cap, N
    moment_saturation: float = 60.0  # yaw moment cap, N m
    noise_std: float = 0.0           # white force noise per axis, N

    def __post_init__(self):
        if not 0.0 < self.saturation <= 200.0:
            raise ValueError("saturation must lie in (0, 200] N")
        if self.moment_saturation <= 0 or self.noise_std < 0:
            raise ValueError("bad leader parameters")

    def force(self, ref, obj_pos, obj_vel, obj_yaw, obj_yaw_rate, rng=None):
        """Planar force and yaw moment the leader applies to the object."""
        pos_ref, vel_ref, yaw_ref, yaw_rate_ref = ref
        f = self.kp * (pos_ref - obj_pos) + self.kd * (vel_ref - obj_vel)
        if rng is not None and self.noise_std > 0:
            f = f + rng.normal(0.0, self.noise_std, 2)
        norm = float(np.hypot(f[0], f[1]))
        if norm > self.saturation:
            f = f * (self.saturation / norm)
        m = (self.yaw_kp * normalize_angle(yaw_ref - obj_yaw)
             + self.yaw_kd * (yaw_rate_ref - obj_yaw_rate))
        m = float(np.clip(m, -self.moment_saturation, self.moment_saturation))
        return f, m


class HoldReference:
    """Keep the object where it started."""

    def __init__(self, start, yaw):
        self.start = np.asarray(start, dtype=float)
        self.yaw = float(yaw)

    def sample(self, t):
        return self.start, np.zeros(2), self.yaw, 0.0


class SinusoidReference:
    """Back-and-forth drag along one axis of the start frame.

    The oscillation fades in over rise_time with a raised-cosine
    envelope so the commanded velocity starts from zero instead of the
    sine's full crest.
    """

    def __init__(self, start, yaw, amplitude, period, axis="x",
                 rise_time=None):
        if period <= 0 or amplitude <= 0:
            raise ValueError("amplitude and period must be positive")
        if axis not in ("x", "y"):
            raise ValueError("axis must be x or y")
        self.start = np.asarray(start, dtype=float)
        self.yaw = float(yaw)
        self.amplitude = float(amplitude)
        self.omega = 2.0 * np.pi / float(period)
        self.rise = float(period if rise_time is None else rise_time)
        if self.rise < 0:
            raise ValueError("rise_time must be non-negative")
        self.unit = np.array([1.0, 0.0] if axis == "x" else [0.0, 1.0])

    def sample(self, t):
        w = self.omega
        if self.rise > 0 and t < self.rise:
            p = np.pi * t / self.rise
            env = 0.5 * (1.0 - np.cos(p))
            denv = 0.5 * np.pi / self.rise * np.sin(p)
        else:
            env, denv = 1.0, 0.0
        s = self.amplitude * env * np.sin(w * t)
        ds = self.amplitude * (denv * np.sin(w * t)
                               + env * w * np.cos(w * t))
        return self.start + s * self.unit, ds * self.unit, self.yaw, 0.0


class RampReference:
    """Accelerate smoothly to a forward cruise speed and hold it."""

    def __init__(self, start, yaw, speed, rise_time=3.0):
        if rise_time <= 0:
            raise ValueError("rise_time must be positive")
        self.start = np.asarray(start, dtype=float)
        self.yaw = float(yaw)
        self.speed = float(speed)
        self.rise = float(rise_time)

    def sample(self, t):
        if t < self.rise:
            v = self.speed * t / self.rise
            x = 0.5 * self.speed * t * t / self.rise
        else:
            v = self.speed
            x = self.speed * (t - 0.5 * self.rise)
        return (self.start + np.array([x, 0.0]),
                np.array([v, 0.0]), self.yaw, 0.0)


class WaypointReference:
    """Constant-speed traversal of a polyline, then hold the endpoint.

    Points are offsets from the start pose; heading is left untouched so
    the run stays a pure translation.
    """

    def __init__(self, start, yaw, points, speed):
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        if not np.all(np.isfinite(pts)):
            raise ValueError("waypoints must be finite")
        if speed <= 0:
            raise ValueError("speed must be positive")
        self.start = np.asarray(start, dtype=float)
        self.yaw = float(yaw)
        self.speed = float(speed)
        self.points = np.vstack([np.zeros(2), pts]) + self.start
        seg = np.diff(self.points, axis=0)
        self.lengths = np.hypot(seg[:, 0], seg[:, 1])
        if np.any(self.lengths <= 0):
            raise ValueError("repeated consecutive waypoints")
        self.units = seg / self.lengths[:, None]
        self.cum = np.concatenate([[0.0], np.cumsum(self.lengths)])

    def sample(self, t):
        s = self.speed * t
        if s >= self.cum[-1]:
            return self.points[-1], np.zeros(2), self.yaw, 0.0
        i = int(np.searchsorted(self.cum, s, side="right") - 1)
        pos = self.points[i] + (s - self.cum[i]) * self.units[i]
        return pos, self.speed * self.units[i], self.yaw, 0.0


class SemicircleReference:
    """Half circle to the left at constant angular rate, yaw tangent."""

    def __init__(self, start, yaw, radius, angular_rate):
        if radius <= 0 or angular_rate <= 0:
            raise ValueError("radius and angular_rate must be positive")
        self.start = np.asarray(start, dtype=float)
        self.yaw0 = float(yaw)
        self.radius = float(radius)
        self.rate = float(angular_rate)
        self.center = self.start + radius * np.array(
            [-np.sin(self.yaw0), np.cos(self.yaw0)])

    def sample(self, t):
        phi = self.rate * t
        if phi >= np.pi:
            phi, rate = np.pi, 0.0
        else:
            rate = self.rate
        a = self.yaw0 + phi
        pos = self.center + self.radius * np.array([np.sin(a), -np.cos(a)])
        vel = self.radius * rate * np.array([np.cos(a), np.sin(a)])
        return pos, vel, normalize_angle(a), rate


_REFERENCE_KEYS = {
    "hold": {},
    "sinusoid": {"amplitude": float, "period": float, "axis": str,
                 "rise_time": float},
    "ramp": {"speed": float, "rise_time": float},
    "waypoints": {"points": str, "speed": float},
    "semicircle": {"radius": float, "angular_rate": float},
}


@dataclass
class Scenario:
    """Everything needed to reproduce one run."""

    name: str
    duration: float
    case: int = 1
    seed: int = 0
    object_start: np.ndarray = field(default_factory=lambda: np.array([0.6, 0.0]))
    object_yaw: float = 0.0
    leader: LeaderModel = field(default_factory=LeaderModel)
    model: str = "hold"
    model_args: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.duration <= 0:
            raise ValueError("duration must be positive")
        if self.case not in (1, 2, 3, 4):
            raise ValueError("case must be 1..4")
        if self.model not in _REFERENCE_KEYS:
            raise ValueError(f"unknown leader model {self.model!r}")
        self.object_start = np.asarray(self.object_start,
                                       dtype=float).reshape(2)

    def make_reference(self):
        args = dict(self.model_args)
        if self.model == "hold":
            return HoldReference(self.object_start, self.object_yaw)
        if self.model == "sinusoid":
            return SinusoidReference(self.object_start, self.object_yaw,
                                     **args)
        if self.model == "ramp":
            return RampReference(self.object_start, self.object_yaw, **args)
        if self.model == "waypoints":
            args["points"] = _parse_points(args["points"])
            return WaypointReference(self.object_start, self.object_yaw,
                                     **args)
        return SemicircleReference(self.object_start, self.object_yaw,
                                   **args)

    def make_params(self):
        return compliance_case(self.case)


def _parse_points(text):
    pts = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        xy = chunk.split(",")
        if len(xy) != 2:
            raise ValueError(f"bad waypoint {chunk!r}")
        pts.append((float(xy[0]), float(xy[1])))
    if not pts:
        raise ValueError("waypoints list is empty")
    return pts


_SCENARIO_KEYS = {
    "name": str, "duration": float, "case": int, "seed": int,
    "object_x": float, "object_y": float, "object_yaw": float,
}
_LEADER_KEYS = {
    "kp": float, "kd": float, "yaw_kp": float, "yaw_kd": float,
    "saturation": float, "moment_saturation": float, "noise_std": float,
    "model": str,
}


def _take(section, allowed, where):
    out = {}
    for key, raw in section.items():
        if key not in allowed:
            raise ValueError(f"unknown key {key!r} in [{where}]")
        out[key] = allowed[key](raw)
    return out


def parse_scenario(text, name_hint="scenario"):
    """Parse INI text into a Scenario; unknown keys and sections fail."""
    parser = configparser.ConfigParser(interpolation=None)
    parser.read_string(text)

    if "scenario" not in parser:
        raise ValueError("missing [scenario] section")
    sc = _take(parser["scenario"], _SCENARIO_KEYS, "scenario")
    leader_raw = _take(parser["leader"], _LEADER_KEYS,
                       "leader") if "leader" in parser else {}
    model = leader_raw.pop("model", "hold")
    if model not in _REFERENCE_KEYS:
        raise ValueError(f"unknown leader model {model!r}")

    model_args = {}
    if model in parser:
        model_args = _take(parser[model], _REFERENCE_KEYS[model], model)
    for section in parser.sections():
        if section not in ("scenario", "leader", model):
            raise ValueError(f"unknown section [{section}]")

    if "duration" not in sc:
        raise ValueError("[scenario] needs a duration")
    start = np.array([sc.pop("object_x", 0.6), sc.pop("object_y", 0.0)])
    yaw = sc.pop("object_yaw", 0.0)
    return Scenario(name=sc.pop("name", name_hint),
                    duration=sc.pop("duration"),
                    case=sc.pop("case", 1), seed=sc.pop("seed", 0),
                    object_start=start, object_yaw=yaw,
                    leader=LeaderModel(**leader_raw),
                    model=model, model_args=model_args)


def load_scenario(path):
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    name_hint = str(path).rsplit("/", 1)[-1].rsplit(".", 1)[0]
    return parse_scenario(text, name_hint)


def bundled_names():
    """Names of the scenario files shipped with the package."""
    root = resources.files(__package__) / "scenarios"
    return sorted(p.name[:-4] for p in root.iterdir()
                  if p.name.endswith(".ini"))


def load_bundled(name):
    root = resources.files(__package__) / "scenarios"
    path = root / f"{name}.ini"
    if not path.is_file():
        raise FileNotFoundError(f"no bundled scenario named {name!r}")
    return parse_scenario(path.read_text(encoding="utf-8"), name)


def bundled_suite():
    """The full evaluation suite: every bundled scenario, with the
    periodic drag expanded to all four compliance cases."""
    runs = []
    for name in bundled_names():
        scenario = load_bundled(name)
        if scenario.model == "sinusoid":
            for case in (1, 2, 3, 4):
                variant = load_bundled(name)
                variant.case = case
                variant.name = f"{name}-case{case}"
                runs.append(variant)
        else:
            runs.append(scenario)
    return runs
