"""Jump-diffusion model coefficients and path simulation.

The state follows

    dX = f(t, X) dt + sigma(t, X) dW + integral of xi(t, X-, z) dN(t, z)

where N is a compound Poisson random measure with finite intensity
``jump_intensity`` and mark law ``mark_distribution``.  With
``compensated=True`` the jump integral is taken against the compensated
measure, which shifts the effective drift by minus
``jump_intensity * E[xi(t, x, z)]``.

Simulation is Euler-Maruyama on a uniform grid refined to include every
jump time exactly, so jump placement carries no O(dt) bias.
"""

from dataclasses import dataclass, field

import numpy as np

from .distributions import expectation
from .errors import NumericalBlowupError, ParameterError

BLOWUP_THRESHOLD = 1e12


def _identity_mark(t, x, z):
    return z


@dataclass
class JumpDiffusionSpec:
    """Coefficients of a 1-D jump diffusion.

    ``drift`` and ``diffusion`` are callables of ``(t, x)``;
    ``jump_coefficient`` maps ``(t, x, z)`` to the applied jump size and
    defaults to the raw mark ``z``.  Callables must accept numpy arrays in
    the state argument so paths can be post-processed vectorised.
    """

    drift: callable
    diffusion: callable
    jump_intensity: float = 0.0
    mark_distribution: object = None
    jump_coefficient: callable = field(default=_identity_mark)
    compensated: bool = False

    def __post_init__(self):
        if not np.isfinite(self.jump_intensity) or self.jump_intensity < 0:
            raise ParameterError(
                f"jump intensity must be finite and nonnegative, got {self.jump_intensity}"
            )
        if self.jump_intensity > 0 and self.mark_distribution is None:
            raise ParameterError("positive jump intensity requires a mark distribution")
        # state-independent coefficient xi = z admits a constant compensator
        self._compensator_const = (
            self.jump_intensity * self.mark_distribution.mean
            if self.jump_intensity > 0 and self.jump_coefficient is _identity_mark
            else None
        )

    def compensator(self, t, x):
        """Drift correction ``jump_intensity * E[xi(t, x, z)]``."""
        if self.jump_intensity == 0:
            return 0.0
        if self._compensator_const is not None:
            return self._compensator_const
        return self.jump_intensity * expectation(
            self.mark_distribution, lambda z: self.jump_coefficient(t, x, z)
        )

    def effective_drift(self, t, x):
        mu = self.drift(t, x)
        if self.compensated and self.jump_intensity > 0:
            mu = mu - self.compensator(t, x)
        return mu


@dataclass(frozen=True)
class JumpRecord:
    index: int
    time: float
    mark: float
    size: float


@dataclass(frozen=True)
class InterventionRecord:
    index: int
    time: float
    impulse: float


@dataclass
class SamplePath:
    """One simulated trajectory.

    ``states[k]`` is the value after any event at ``times[k]``;
    ``pre_states[k]`` is the left limit x(t-).  They differ exactly at
    recorded jump and intervention instants.
    """

    times: np.ndarray
    states: np.ndarray
    pre_states: np.ndarray
    jumps: list
    interventions: list

    @property
    def initial_state(self):
        return float(self.pre_states[0])

    @property
    def final_state(self):
        return float(self.states[-1])

    def validate(self, atol=1e-9):
        """Check the structural invariants; raises AssertionError on failure."""
        t = self.times
        assert t.ndim == 1 and np.all(np.diff(t) > 0), "times must strictly increase"
        assert self.states.shape == t.shape == self.pre_states.shape
        applied = np.zeros_like(self.states)
        for rec in self.jumps:
            assert t[0] <= rec.time <= t[-1]
            assert t[rec.index] == rec.time
            applied[rec.index] += rec.size
        for rec in self.interventions:
            assert t[0] <= rec.time <= t[-1]
            assert t[rec.index] == rec.time
            applied[rec.index] += rec.impulse
        gap = self.states - self.pre_states - applied
        scale = np.maximum(1.0, np.abs(self.states))
        assert np.all(np.abs(gap) <= atol * scale), "post - pre must equal applied events"


def _sample_jump_schedule(gen, intensity, mark_distribution, horizon):
    """Generator-level jump schedule: exact exponential interarrivals."""
    if intensity == 0:
        return np.empty(0), np.empty(0)
    scale = 1.0 / intensity
    chunk = max(8, int(1.5 * intensity * horizon) + 1)
    times = []
    total = 0.0
    while True:
        gaps = gen.exponential(scale, size=chunk)
        arrivals = total + np.cumsum(gaps)
        inside = arrivals[arrivals <= horizon]
        times.append(inside)
        if inside.size < arrivals.size:
            break
        total = arrivals[-1]
    times = np.concatenate(times)
    marks = np.asarray(mark_distribution.sample(gen, times.size), dtype=float)
    return times, marks


def sample_jump_times(stream, intensity, mark_distribution, horizon):
    """Draw exact Poisson jump times on ``(0, horizon]`` with iid marks.

    Returns ``(times, marks)`` as float arrays; both are empty when the
    intensity is zero.
    """
    if intensity < 0:
        raise ParameterError(f"intensity must be nonnegative, got {intensity}")
    if horizon <= 0:
        raise ParameterError(f"horizon must be positive, got {horizon}")
    return _sample_jump_schedule(stream.generator, intensity, mark_distribution, horizon)


def simulate_jump_diffusion(spec, x0, horizon, dt, stream):
    """Euler-Maruyama path of ``spec`` started at ``x0`` on ``[0, horizon]``.

    The uniform grid of step at most ``dt`` is refined with the exact jump
    times; jumps are applied to the left limit at their own grid node.
    Raises :class:`NumericalBlowupError` if the state passes 1e12 in
    magnitude.
    """
    if dt <= 0 or horizon <= 0:
        raise ParameterError("dt and horizon must be positive")

    jump_times, marks = sample_jump_times(
        stream, spec.jump_intensity, spec.mark_distribution, horizon
    ) if spec.jump_intensity > 0 else (np.empty(0), np.empty(0))

    n_steps = max(1, int(np.ceil(horizon / dt - 1e-12)))
    base = np.linspace(0.0, horizon, n_steps + 1)
    times = np.unique(np.concatenate([base, jump_times]))
    jump_at = {}
    idx = np.searchsorted(times, jump_times)
    for j, k in enumerate(idx):
        jump_at.setdefault(int(k), []).append(j)

    gen = stream.generator
    normals = gen.standard_normal(times.size - 1)

    states = np.empty_like(times)
    pre_states = np.empty_like(times)
    states[0] = pre_states[0] = x0
    jumps = []
    x = float(x0)
    steps = np.diff(times)
    noise = np.sqrt(steps) * normals
    drift_fn = spec.drift
    diffusion_fn = spec.diffusion
    comp = spec._compensator_const if spec.compensated else None
    per_step_comp = spec.compensated and comp is None
    for k in range(times.size - 1):
        t = times[k]
        t_next = times[k + 1]
        mu = drift_fn(t, x)
        if comp is not None:
            mu = mu - comp
        elif per_step_comp:
            mu = mu - spec.compensator(t, x)
        x_new = x + mu * steps[k] + diffusion_fn(t, x) * noise[k]
        pre_states[k + 1] = x_new
        for j in jump_at.get(k + 1, ()):
            size = spec.jump_coefficient(t_next, x_new, marks[j])
            jumps.append(JumpRecord(index=k + 1, time=float(t_next),
                                    mark=float(marks[j]), size=float(size)))
            x_new = x_new + size
        states[k + 1] = x_new
        if not -BLOWUP_THRESHOLD <= x_new <= BLOWUP_THRESHOLD:
            raise NumericalBlowupError(
                f"state blew up to {x_new!r} at t={t_next}", time=float(t_next)
            )
        x = float(x_new)

    return SamplePath(times=times, states=states, pre_states=pre_states,
                      jumps=jumps, interventions=[])
