"""Named configurations reproducing the figure scenarios.

All figures share r = 0.31, theta = 0, gamma = 1 and omega_c = omega0 = 1
unless the preset varies them. Non-Markov runs use the default Ohmic
coupling Gamma = 1/pi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from ..bath import BathSpec
from ..qubits import squeeze_amplitudes
from .config import ExperimentConfig, InitialState

T_MAX = 10.0
KTS = (0.0, 2.0, 5.0)


@dataclass(frozen=True)
class Expectation:
    """One checkable statement about a preset run.

    kind
        ``cycles_equal`` / ``cycles_at_least``: ESD cycle count of ``regime``.
        ``constant``: max |C(t) - value| over ``[0, t_end]`` below ``tol``
        (``value`` defaults to C(0)).
        ``deviates``: max |C(t) - C(0)| over ``[0, t_end]`` above ``tol``.
        ``asymptote_below``: asymptotic concurrence below ``tol``.
        ``drift``: report max |C(t) - C(0)| without a verdict.
    """

    kind: str
    regime: str
    n: int = 0
    tol: float = 0.0
    value: float | None = None
    t_end: float | None = None


@dataclass(frozen=True)
class Preset:
    config: ExperimentConfig
    description: str
    expectations: tuple = field(default=())


def _bath(**kw) -> BathSpec:
    base = dict(r=0.31, theta=0.0, kt=0.0)
    base.update(kw)
    return BathSpec(**base)


def _cfg(name, state, **bath_kw) -> ExperimentConfig:
    return ExperimentConfig(
        name=name,
        bath=_bath(**bath_kw),
        initial_state=state,
        integrator=replace(ExperimentConfig().integrator, t_max=T_MAX),
    )


def dark_state_concurrence(r: float) -> float:
    n, m = squeeze_amplitudes(r)
    return 2 * n * m / (n * n + m * m)


def _build() -> dict[str, Preset]:
    out: dict[str, Preset] = {}

    def add(cfg, desc, *exp):
        out[cfg.name] = Preset(cfg, desc, tuple(exp))

    fig1 = {"fig1a": 0.0, "fig1b": 0.5, "fig1c": 0.9, "fig1d": 1.0}
    for name, eps in fig1.items():
        exp = ()
        if name == "fig1a":
            exp = (Expectation("cycles_equal", "markov", n=1), Expectation("cycles_at_least", "nonmarkov", n=3))
        elif name == "fig1c":
            exp = (Expectation("cycles_equal", "markov", n=0), Expectation("cycles_at_least", "nonmarkov", n=1))
        elif name == "fig1d":
            exp = (
                Expectation("constant", "markov", tol=1e-4, value=dark_state_concurrence(0.31), t_end=5.0),
                Expectation("deviates", "nonmarkov", tol=0.02, t_end=5.0),
            )
        add(_cfg(name, InitialState("psi1", eps)), f"Psi1 with epsilon={eps}", *exp)

    fig2 = {"fig2a": 0.1, "fig2b": 0.4, "fig2c": 0.54, "fig2d": 0.707}
    for name, eps in fig2.items():
        exp = ()
        if name == "fig2d":
            exp = (Expectation("cycles_equal", "markov", n=0), Expectation("cycles_at_least", "nonmarkov", n=1))
        add(_cfg(name, InitialState("psi2", eps)), f"Psi2 with epsilon={eps}", *exp)

    for kt in KTS:
        suffix = "" if kt == 0 else f"_kt{int(kt)}"
        add(
            _cfg(f"fig2_singlet{suffix}", InitialState("psi2", 1.0), kt=kt),
            f"singlet (Psi2 with epsilon=1) at KT={kt:g}",
            Expectation("constant", "markov", tol=1e-6, value=1.0, t_end=5.0),
            Expectation("constant", "nonmarkov", tol=1e-6, value=1.0, t_end=5.0),
        )

    for tag, r in (("r005", 0.05), ("r009", 0.09)):
        add(
            _cfg(f"fig3a_{tag}", InitialState("phi1"), r=r),
            f"phi1 with r={r}, theta=0",
            Expectation("constant", "markov", tol=1e-4, value=dark_state_concurrence(r), t_end=5.0),
            Expectation("deviates", "nonmarkov", tol=0.02, t_end=5.0),
        )
    for tag, th in (("pi6", math.pi / 6), ("pi", math.pi)):
        add(
            _cfg(f"fig3b_{tag}", InitialState("phi1"), r=0.3, theta=th),
            f"phi1 with r=0.3, theta={th:.6g}",
            Expectation("constant", "markov", tol=1e-4, value=dark_state_concurrence(0.3), t_end=5.0),
        )

    for kt in KTS:
        k = f"kt{int(kt)}"
        hot = kt >= 5
        add(
            _cfg(f"fig4a_{k}", InitialState("psi1", 0.0), kt=kt),
            f"Psi1(epsilon=0) at KT={kt:g}",
            *((Expectation("asymptote_below", "markov", tol=1e-3),
               Expectation("asymptote_below", "nonmarkov", tol=1e-3)) if hot else ()),
        )
        for construction in ("vacuum", "thermal"):
            add(
                _cfg(f"fig4b_{k}_{construction}", InitialState(f"phi1_{construction}"), kt=kt),
                f"phi1 ({construction} N, M) at KT={kt:g}",
                Expectation("drift", "markov", t_end=5.0),
                Expectation("drift", "nonmarkov", t_end=5.0),
            )
        add(
            _cfg(f"fig4c_{k}", InitialState("psi2", 0.1), kt=kt),
            f"Psi2(epsilon=0.1) at KT={kt:g}",
            *((Expectation("asymptote_below", "markov", tol=1e-3),
               Expectation("asymptote_below", "nonmarkov", tol=1e-3)) if hot else ()),
        )
        add(_cfg(f"fig4d_{k}", InitialState("psi2", 0.54), kt=kt), f"Psi2(epsilon=0.54) at KT={kt:g}")
    return out


PRESETS: dict[str, Preset] = _build()


def get_preset(name: str) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}") from None
