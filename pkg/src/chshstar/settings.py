"""Game values per physical setting: exhaustive enumeration or optimization.

Finite settings (Clifford, classical reversible/irreversible, classical
mod-3) are searched exhaustively; the unitary setting is optimized with
Nelder-Mead restarts over Euler-angle parametrizations.  Every returned
witness is re-evaluated through the generic evaluators as a consistency
check before the result is handed back.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from . import game
from .quantum import (
    Channel,
    Measurement,
    State,
    basis_ket,
    pauli_eigenstates,
    phase_canonical,
    plus_ket,
    qudit_gates,
    ry,
    rz,
    H,
    I2,
    S,
    T,
    X,
)

DEFAULT_SEED = 12345

# ZYZ angles (alpha, beta, gamma) per gate for the S / T-dagger / T strategy.
OPTIMAL_UNITARY_ANGLES = (
    0.0, 0.0, 0.0,            # A0 = I
    np.pi / 2, 0.0, 0.0,      # A1 = S
    -np.pi / 4, 0.0, 0.0,     # B0 = T^+
    np.pi / 4, 0.0, 0.0,      # B1 = T
)


class ConsistencyError(RuntimeError):
    """A computed value and its witness's re-evaluation disagree."""


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 32
    max_iterations: int = 4000
    tolerance: float = 1e-12
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if self.restarts < 32:
            raise ValueError(f"restarts must be >= 32, got {self.restarts}")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")
        if not 0 < self.tolerance < 1:
            raise ValueError("tolerance must be in (0, 1)")


SETTING_KINDS = (
    "unitary",
    "clifford",
    "classical_reversible",
    "classical_irreversible",
    "clifford_plus_rz",
    "qutrit_unitary_fixed",
    "classical_q3_reversible",
)


@dataclass(frozen=True)
class SettingSpec:
    """Which physics the player is allowed, and in what dimension."""

    kind: str
    dimension: int = 2
    epsilon: float | None = None

    def __post_init__(self):
        if self.kind not in SETTING_KINDS:
            raise ValueError(f"unknown setting kind {self.kind!r}")
        allowed = {
            "unitary": (2,),
            "clifford": (2,),
            "classical_reversible": (2, 3),
            "classical_irreversible": (2,),
            "clifford_plus_rz": (2,),
            "qutrit_unitary_fixed": (3,),
            "classical_q3_reversible": (3,),
        }[self.kind]
        if self.dimension not in allowed:
            raise ValueError(
                f"setting {self.kind!r} supports dimensions {allowed}, got {self.dimension}"
            )
        if self.kind == "clifford_plus_rz":
            if self.epsilon is None or not 0 < self.epsilon < np.pi / 2:
                raise ValueError("clifford_plus_rz requires epsilon in (0, pi/2)")
        elif self.epsilon is not None:
            raise ValueError(f"setting {self.kind!r} takes no epsilon")


@dataclass(frozen=True)
class ValueResult:
    """Best value found, a witness achieving it, and how it was found."""

    value: float
    witness: object
    method: str
    strategies_examined: int
    quantization_error: float | None = None


def _check_witness(value: float, reevaluated: float) -> None:
    if abs(value - reevaluated) > 1e-9:
        raise ConsistencyError(
            f"witness re-evaluates to {reevaluated!r}, claimed value {value!r}"
        )


# ---------------------------------------------------------------------------
# Strategy builders
# ---------------------------------------------------------------------------

def optimal_unitary_strategy() -> game.Strategy:
    """|+>, A = (I, S), B = (T^+, T), X measurement: the Tsirelson-achieving play."""
    return game.Strategy(
        initial=State.from_ket(plus_ket()),
        a_gates={0: Channel.unitary(I2), 1: Channel.unitary(S)},
        b_gates={0: Channel.unitary(T.conj().T), 1: Channel.unitary(T)},
        measurement=Measurement.pauli("x"),
    )


def trivial_strategy() -> game.Strategy:
    """|0>, identity gates, constant-0 readout: wins whenever a*b = 0."""
    ident = Channel.unitary(I2)
    return game.Strategy(
        initial=State.from_ket(basis_ket(2, 0)),
        a_gates={0: ident, 1: ident},
        b_gates={0: ident, 1: ident},
        measurement=Measurement.pauli("z", labels=(0, 0)),
    )


def irreversible_strategy() -> game.Strategy:
    """|0>, A = (I, X), B = (ERASE, I), Z measurement: wins with certainty."""
    return game.Strategy(
        initial=State.from_ket(basis_ket(2, 0)),
        a_gates={0: Channel.unitary(I2), 1: Channel.unitary(X)},
        b_gates={0: Channel.erase(), 1: Channel.unitary(I2)},
        measurement=Measurement.pauli("z"),
    )


def rz_pair_strategy(epsilon: float) -> game.Strategy:
    """The optimal play with T replaced by rz(epsilon), T^+ by rz(epsilon)^+."""
    if not 0 < epsilon < np.pi / 2:
        raise ValueError(f"epsilon {epsilon} outside the open interval (0, pi/2)")
    return game.Strategy(
        initial=State.from_ket(plus_ket()),
        a_gates={0: Channel.unitary(I2), 1: Channel.unitary(S)},
        b_gates={0: Channel.unitary(rz(epsilon).conj().T), 1: Channel.unitary(rz(epsilon))},
        measurement=Measurement.pauli("x"),
    )


def qutrit_fixed_strategy() -> game.Strategy:
    """The fixed qutrit play: T3|+>, phase gates V/W, Fourier measurement."""
    gates = qudit_gates(3)
    return game.Strategy(
        initial=State.from_ket(gates["T3"] @ plus_ket(3)),
        a_gates={
            0: Channel.unitary(gates["I"]),
            1: Channel.unitary(gates["V"]),
            2: Channel.unitary(gates["W"]),
        },
        b_gates={
            0: Channel.unitary(gates["I"]),
            1: Channel.unitary(gates["W"]),
            2: Channel.unitary(gates["V"]),
        },
        measurement=Measurement.fourier(3),
    )


# ---------------------------------------------------------------------------
# Clifford setting
# ---------------------------------------------------------------------------

def clifford_group_d2() -> list[np.ndarray]:
    """The 24 phase-canonical single-qubit Cliffords, closure of {H, S}."""
    seen: dict[tuple, np.ndarray] = {}

    def key(u: np.ndarray) -> tuple:
        return tuple(np.round(u.flatten().view(float), 9))

    frontier = [phase_canonical(g) for g in (I2, H, S)]
    for g in frontier:
        seen[key(g)] = g
    while frontier:
        new = []
        for g in frontier:
            for gen in (H, S):
                prod = phase_canonical(g @ gen)
                k = key(prod)
                if k not in seen:
                    seen[k] = prod
                    new.append(prod)
        frontier = new
    group = [seen[k] for k in sorted(seen)]
    if len(group) != 24:
        raise ConsistencyError(f"Clifford closure produced {len(group)} elements, expected 24")
    return group


def value_clifford() -> ValueResult:
    """Exhaustive search over all Clifford-setting strategies.

    6 initial Pauli eigenstates x 24^4 gate tuples x 3 Pauli axes x 2 outcome
    labelings.  Probabilities of Pauli measurements on stabilizer states are
    exactly 0, 1/2 or 1; after validating that numerically, the table is
    snapped to the exact grid so the maximum (and the eighth-quantization of
    every examined average) comes out exact.
    """
    cliffords = clifford_group_d2()
    gate_stack = np.stack(cliffords)
    eigenstates = pauli_eigenstates()
    order = list(eigenstates.items())

    best = -1.0
    best_loc = None
    quantization_error = 0.0
    examined = 0

    for si, (_, psi0) in enumerate(order):
        a_images = np.einsum("gij,j->gi", gate_stack, psi0)
        ba_images = np.einsum("hij,gj->hgi", gate_stack, a_images)
        for axis in ("x", "y", "z"):
            e_plus = eigenstates[axis + "+"]
            p_plus = np.abs(np.einsum("i,hgi->hg", e_plus.conj(), ba_images)) ** 2
            dev = float(np.max(np.abs(p_plus * 2 - np.round(p_plus * 2))))
            if dev > 1e-9:
                raise ConsistencyError(
                    f"stabilizer measurement probability off the (0, 1/2, 1) grid by {dev}"
                )
            w = p_plus.T  # (a_gate, b_gate)
            t1 = w[:, None, :, None]  # (a0, b0)
            t2 = w[:, None, None, :]  # (a0, b1)
            t3 = w[None, :, :, None]  # (a1, b0)
            t4 = w[None, :, None, :]  # (a1, b1)
            for labeling in ((0, 1), (1, 0)):
                if labeling == (0, 1):
                    avg = (t1 + t2 + t3 + (1.0 - t4)) / 4.0
                else:
                    avg = ((1.0 - t1) + (1.0 - t2) + (1.0 - t3) + t4) / 4.0
                examined += avg.size
                # Eighth-quantization of the raw averages, then snap so the
                # reported maximum is exact.
                eighths = avg * 8
                quantization_error = max(
                    quantization_error, float(np.max(np.abs(eighths - np.round(eighths))))
                )
                if quantization_error > 1e-9:
                    raise ConsistencyError(
                        f"average off the 1/8 grid by {quantization_error}"
                    )
                avg = np.round(eighths) / 8.0
                m = float(avg.max())
                if m > best:
                    best = m
                    best_loc = (si, axis, labeling, np.unravel_index(int(np.argmax(avg)), avg.shape))

    si, axis, labeling, (a0, a1, b0, b1) = best_loc
    witness = game.Strategy(
        initial=State.from_ket(order[si][1]),
        a_gates={0: Channel.unitary(cliffords[a0]), 1: Channel.unitary(cliffords[a1])},
        b_gates={0: Channel.unitary(cliffords[b0]), 1: Channel.unitary(cliffords[b1])},
        measurement=Measurement.pauli(axis, labels=labeling),
    )
    report = game.evaluate(game.GameSpec(2), witness)
    _check_witness(best, report.average)
    return ValueResult(
        value=best,
        witness=witness,
        method="exhaustive",
        strategies_examined=examined,
        quantization_error=quantization_error,
    )


# ---------------------------------------------------------------------------
# Classical settings
# ---------------------------------------------------------------------------

def _search_classical(d, q, a_pool, b_pool, readouts, n_a, n_b):
    """Deterministic exhaustive search; first-found maximum wins.

    Iteration is lexicographic over (initial symbol, A gates, B gates,
    readout); gates are function tables.  Returns (best wins, witness, count).
    """
    spec = game.GameSpec(q)
    inputs = spec.input_pairs()
    targets = [(a * b) % q for a, b in inputs]
    best_wins = -1
    witness = None
    examined = 0
    for s0 in range(d):
        for a_tabs in itertools.product(a_pool, repeat=n_a):
            u = [a_tabs[a][s0] for a in range(n_a)]
            for b_tabs in itertools.product(b_pool, repeat=n_b):
                finals = [b_tabs[b][u[a]] for a, b in inputs]
                for readout in readouts:
                    examined += 1
                    wins = sum(1 for f, t in zip(finals, targets) if readout[f] == t)
                    if wins > best_wins:
                        best_wins = wins
                        witness = (s0, a_tabs, b_tabs, readout)
    return best_wins, witness, examined


def _classical_result(d, q, wins, witness_tuple, examined) -> ValueResult:
    spec = game.GameSpec(q)
    n_inputs = len(spec.input_pairs())
    s0, a_tabs, b_tabs, readout = witness_tuple
    witness = game.ClassicalStrategy(
        num_symbols=d,
        initial=s0,
        a_gates={k: tab for k, tab in enumerate(a_tabs)},
        b_gates={k: tab for k, tab in enumerate(b_tabs)},
        readout=readout,
    )
    value = wins / n_inputs
    report = game.evaluate_classical(spec, witness)
    _check_witness(value, report.average)
    return ValueResult(
        value=value, witness=witness, method="exhaustive", strategies_examined=examined
    )


def value_classical_reversible(d: int) -> ValueResult:
    """Exhaustive search over permutation gates and all symbol-to-bit readouts."""
    if d not in (2, 3):
        raise ValueError(f"unsupported dimension {d}")
    perms = list(itertools.permutations(range(d)))
    readouts = list(itertools.product(range(2), repeat=d))
    wins, wit, n = _search_classical(d, 2, perms, perms, readouts, 2, 2)
    return _classical_result(d, 2, wins, wit, n)


def value_classical_irreversible(bijective_only: bool = False) -> ValueResult:
    """Exhaustive search over all maps {0,1} -> {0,1} per gate slot.

    With ``bijective_only`` the same search is restricted to permutations,
    which recovers the reversible bound 0.75.
    """
    if bijective_only:
        pool = list(itertools.permutations(range(2)))
    else:
        pool = list(itertools.product(range(2), repeat=2))
    readouts = list(itertools.product(range(2), repeat=2))
    wins, wit, n = _search_classical(2, 2, pool, pool, readouts, 2, 2)
    return _classical_result(2, 2, wins, wit, n)


def value_classical_q3(gate_family: str = "all") -> ValueResult:
    """Exhaustive mod-3 search: trit initial, permutation gates, identity readout.

    ``gate_family`` is "all" for the full symmetric group S3 per slot, or
    "cyclic" for powers of the shift only.  Note: over all of S3 the true
    maximum is 7/9, achieved by strategies that use a transposition; the
    often-quoted bound 2/3 is the maximum of the cyclic-shift family (and is
    achieved there by A2 = B1 = shift, identity elsewhere).
    """
    if gate_family == "all":
        pool = list(itertools.permutations(range(3)))
    elif gate_family == "cyclic":
        pool = [(0, 1, 2), (1, 2, 0), (2, 0, 1)]
    else:
        raise ValueError(f"unknown gate family {gate_family!r}")
    readouts = [(0, 1, 2)]
    wins, wit, n = _search_classical(3, 3, pool, pool, readouts, 3, 3)
    return _classical_result(3, 3, wins, wit, n)


# ---------------------------------------------------------------------------
# Unitary setting (numerical optimization)
# ---------------------------------------------------------------------------

def _euler(angles: np.ndarray) -> np.ndarray:
    a, b, g = angles
    return rz(a) @ ry(b) @ rz(g)


def _bloch_ket(theta: float, phi: float) -> np.ndarray:
    return np.array([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)], dtype=complex)


def _win_average(gates: list[np.ndarray], psi0: np.ndarray, e_plus: np.ndarray) -> float:
    a_gates, b_gates = gates[:2], gates[2:]
    total = 0.0
    for a in (0, 1):
        for b in (0, 1):
            psi = b_gates[b] @ (a_gates[a] @ psi0)
            p_plus = abs(np.vdot(e_plus, psi)) ** 2
            total += p_plus if a * b == 0 else 1.0 - p_plus
    return total / 4.0


def value_unitary(
    config: OptimizerConfig | None = None,
    free_state_and_measurement: bool = False,
    initial_points=None,
) -> ValueResult:
    """Maximize the average win over four ZYZ-parametrized unitaries.

    By default the initial state is fixed to |+> and the measurement to X
    (the normal form); with ``free_state_and_measurement`` the initial ket
    and the measurement basis are parametrized and optimized as well, and
    the degenerate {0, I} measurement (which plays a constant and reaches
    0.75 at best) is included explicitly.  Derivative-free Nelder-Mead from
    seeded random restarts; ``initial_points`` adds explicit extra starts.
    """
    config = config or OptimizerConfig()
    plus = plus_ket()
    n_params = 16 if free_state_and_measurement else 12

    def objective(angles: np.ndarray) -> float:
        gates = [_euler(angles[3 * k:3 * k + 3]) for k in range(4)]
        if free_state_and_measurement:
            psi0 = _bloch_ket(angles[12], angles[13])
            e_plus = _bloch_ket(angles[14], angles[15])
        else:
            psi0, e_plus = plus, plus
        return -_win_average(gates, psi0, e_plus)

    rng = np.random.default_rng(config.seed)
    starts = [np.asarray(p, dtype=float) for p in (initial_points or [])]
    starts += [rng.uniform(0.0, 2 * np.pi, size=n_params) for _ in range(config.restarts)]

    best_val, best_angles, evaluations = -np.inf, None, 0
    for x0 in starts:
        if x0.shape != (n_params,):
            raise ValueError(f"start point must have {n_params} angles, got {x0.shape}")
        res = minimize(
            objective,
            x0,
            method="Nelder-Mead",
            options={
                "maxiter": config.max_iterations,
                "xatol": 1e-8,
                "fatol": config.tolerance,
            },
        )
        evaluations += int(res.nfev)
        if -res.fun > best_val:
            best_val, best_angles = -res.fun, res.x

    gates = [_euler(best_angles[3 * k:3 * k + 3]) for k in range(4)]
    if free_state_and_measurement:
        psi0 = _bloch_ket(best_angles[12], best_angles[13])
        e_plus = _bloch_ket(best_angles[14], best_angles[15])
        e_minus = np.array([-e_plus[1].conj(), e_plus[0].conj()], dtype=complex)
        measurement = Measurement.from_basis([e_plus, e_minus])
        initial = State.from_ket(psi0)
        # Rank-0/rank-2 projector pairs act as a constant answer: value 0.75.
        if best_val < 0.75:
            return ValueResult(
                value=0.75,
                witness=trivial_strategy(),
                method="optimized",
                strategies_examined=evaluations,
            )
    else:
        measurement = Measurement.pauli("x")
        initial = State.from_ket(plus)
    witness = game.Strategy(
        initial=initial,
        a_gates={0: Channel.unitary(gates[0]), 1: Channel.unitary(gates[1])},
        b_gates={0: Channel.unitary(gates[2]), 1: Channel.unitary(gates[3])},
        measurement=measurement,
    )
    report = game.evaluate(game.GameSpec(2), witness)
    _check_witness(best_val, report.average)
    return ValueResult(
        value=best_val, witness=witness, method="optimized", strategies_examined=evaluations
    )


# ---------------------------------------------------------------------------
# Rz(epsilon) family and the fixed qutrit play
# ---------------------------------------------------------------------------

def success_probability_formula(epsilon: float) -> float:
    """Closed-form success probability of the rz(epsilon)-pair strategy."""
    e = float(epsilon)
    return 0.25 * (
        (0.5 + np.cos(e) / 2)
        + (0.5 + np.cos(-e) / 2)
        + (0.5 + np.cos(np.pi / 2 - e) / 2)
        + (1 - 0.5 - np.cos(np.pi / 2 + e) / 2)
    )


def uniform_open_grid(steps: int) -> list[float]:
    """steps points evenly spaced in the open interval (0, pi/2)."""
    if steps < 2:
        raise ValueError("need at least 2 grid points")
    return [(k * np.pi / 2) / (steps + 1) for k in range(1, steps + 1)]


def epsilon_sweep(eps_grid) -> list[tuple[float, float, float]]:
    """(epsilon, closed-form P, circuit-evaluated P) per grid point."""
    spec = game.GameSpec(2)
    rows = []
    for eps in eps_grid:
        if not 0 < eps < np.pi / 2:
            raise ValueError(f"epsilon {eps} outside the open interval (0, pi/2)")
        p_formula = success_probability_formula(eps)
        p_circuit = game.evaluate(spec, rz_pair_strategy(eps)).average
        rows.append((float(eps), float(p_formula), float(p_circuit)))
    return rows


def value_qutrit_q3_fixed() -> ValueResult:
    """Evaluate the fixed qutrit strategy under the mod-3 game (no optimization)."""
    witness = qutrit_fixed_strategy()
    report = game.evaluate(game.GameSpec(3), witness)
    return ValueResult(
        value=report.average, witness=witness, method="exhaustive", strategies_examined=1
    )


# ---------------------------------------------------------------------------
# Dispatcher
# ---------------------------------------------------------------------------

def compute_value(setting: SettingSpec, config: OptimizerConfig | None = None) -> ValueResult:
    """Evaluate one setting of the value table."""
    if setting.kind == "unitary":
        return value_unitary(config)
    if setting.kind == "clifford":
        return value_clifford()
    if setting.kind == "classical_reversible":
        return value_classical_reversible(setting.dimension)
    if setting.kind == "classical_irreversible":
        return value_classical_irreversible()
    if setting.kind == "clifford_plus_rz":
        witness = rz_pair_strategy(setting.epsilon)
        report = game.evaluate(game.GameSpec(2), witness)
        _check_witness(success_probability_formula(setting.epsilon), report.average)
        return ValueResult(
            value=report.average, witness=witness, method="exhaustive", strategies_examined=1
        )
    if setting.kind == "qutrit_unitary_fixed":
        return value_qutrit_q3_fixed()
    if setting.kind == "classical_q3_reversible":
        return value_classical_q3()
    raise ValueError(f"unknown setting kind {setting.kind!r}")
