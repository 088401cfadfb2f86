"""Benchmark circuit generators, mapped onto a line of qubits.

Every generator builds a logical circuit and routes it onto a linear chain
(physical qubit ``i`` adjacent to ``i+1``) by inserting SWAPs, each as three
CNOTs. Measurement results keep their logical classical-bit order, so ideal
outputs are unaffected by routing.
"""
from __future__ import annotations

import math
from functools import lru_cache

from .circuit import Circuit, Gate, GateKind, cx, h, measure, rx, ry, rz, u1, x

TWO_PI = 2 * math.pi


def route_linear(c: Circuit) -> Circuit:
    """Insert SWAPs so every CNOT acts on neighbouring qubits of a line."""
    pos = list(range(c.num_qubits))  # logical -> physical
    at = list(range(c.num_qubits))   # physical -> logical
    out: list[Gate] = []

    def swap(p: int, q: int):
        out.extend([cx(p, q), cx(q, p), cx(p, q)])
        la, lb = at[p], at[q]
        at[p], at[q] = lb, la
        pos[la], pos[lb] = q, p

    for g in c.gates:
        if g.kind is GateKind.CNOT:
            a, b = g.qubits
            while abs(pos[a] - pos[b]) > 1:
                step = 1 if pos[b] > pos[a] else -1
                swap(pos[a], pos[a] + step)
            out.append(cx(pos[a], pos[b]))
        else:
            out.append(Gate(g.kind, tuple(pos[q] for q in g.qubits), g.params, g.clbits))
    return Circuit(c.num_qubits, out, c.num_clbits, c.name)


def controlled_phase(a: int, b: int, lam: float) -> list[Gate]:
    return [u1(a, lam / 2), cx(a, b), u1(b, -lam / 2), cx(a, b), u1(b, lam / 2)]


def toffoli(a: int, b: int, t: int) -> list[Gate]:
    """Six-CNOT Toffoli with T gates as U1(+-pi/4)."""
    T, Td = math.pi / 4, -math.pi / 4
    return [
        h(t), cx(b, t), u1(t, Td), cx(a, t), u1(t, T), cx(b, t), u1(t, Td), cx(a, t),
        u1(b, T), u1(t, T), h(t), cx(a, b), u1(a, T), u1(b, Td), cx(a, b),
    ]


def bv(secret: str) -> Circuit:
    """Bernstein-Vazirani for ``secret``; data qubits first, ancilla last. Ideal output: the secret."""
    if not secret or set(secret) - {"0", "1"}:
        raise ValueError("secret must be a non-empty bitstring")
    n = len(secret)
    anc = n
    gates = [x(anc)] + [h(q) for q in range(n + 1)]
    gates += [cx(i, anc) for i, b in enumerate(secret) if b == "1"]
    gates += [h(q) for q in range(n)]
    gates += [measure(q, q) for q in range(n)]
    return route_linear(Circuit(n + 1, gates, n, f"bv{n + 1}"))


def _iqft_no_swap(qs: list[int]) -> list[Gate]:
    """Inverse of the swap-free QFT on ``qs`` (first entry most significant)."""
    fwd: list[list[Gate]] = []
    n = len(qs)
    for j in range(n):
        fwd.append([h(qs[j])])
        for m in range(j + 1, n):
            fwd.append(controlled_phase(qs[m], qs[j], TWO_PI / 2 ** (m - j + 1)))
    out: list[Gate] = []
    for block in reversed(fwd):
        for g in reversed(block):
            out.append(u1(g.qubits[0], -g.params[0]) if g.kind is GateKind.U1 else g)
    return out


def qft(n: int, k: int = 0, input: str = "basis") -> Circuit:
    """QFT benchmark on ``n`` qubits.

    ``input="basis"``: QFT applied to ``|k>``, uniform output distribution.
    ``input="fourier"``: the Fourier state of ``k`` is prepared and the
    inverse QFT returns ``|k>``, so the ideal output is the single string
    ``k`` and any phase error shows up in it.
    """
    if n < 1 or not 0 <= k < 2 ** n:
        raise ValueError(f"unsupported QFT size n={n}, k={k}")
    qs = list(range(n))
    bits = format(k, f"0{n}b")
    if input == "basis":
        gates = [x(q) for q in qs if bits[q] == "1"]
        for j in range(n):
            gates.append(h(j))
            for m in range(j + 1, n):
                gates += controlled_phase(m, j, TWO_PI / 2 ** (m - j + 1))
        # the swap network is folded into the measurement map
        gates += [measure(q, n - 1 - q) for q in qs]
    elif input == "fourier":
        gates = []
        for j in qs:
            gates += [h(j), u1(j, TWO_PI * k / 2 ** (n - j))]
        gates += _iqft_no_swap(qs)
        gates += [measure(q, q) for q in qs]
    else:
        raise ValueError(f"unknown QFT input {input!r}")
    return route_linear(Circuit(n, gates, n, f"qft{n}"))


def qaoa_ring(n: int, gamma: float = 0.8, beta: float = 0.4) -> Circuit:
    """One-round MaxCut QAOA on an ``n``-cycle."""
    if n < 3:
        raise ValueError("ring needs at least 3 qubits")
    gates = [h(q) for q in range(n)]
    for i in range(n):
        j = (i + 1) % n
        gates += [cx(i, j), rz(j, 2 * gamma), cx(i, j)]
    gates += [rx(q, 2 * beta) for q in range(n)]
    gates += [measure(q, q) for q in range(n)]
    return route_linear(Circuit(n, gates, n, f"qaoa{n}"))


def qpe(n: int, phase: float | None = None) -> Circuit:
    """Phase estimation of U1(2 pi phase) with ``n - 1`` counting qubits and the target last.

    The default phase (binary 0.1010...) is exactly representable, so the
    ideal output is its bit string.
    """
    if n < 2:
        raise ValueError("QPE needs at least 2 qubits")
    m = n - 1
    if phase is None:
        phase = int("10" * m, 2) % 2 ** m / 2 ** m if m > 1 else 0.5
    t = m
    gates = [x(t)] + [h(q) for q in range(m)]
    for j in range(m):
        gates += controlled_phase(j, t, TWO_PI * phase * 2 ** (m - 1 - j))
    gates += _iqft_no_swap(list(reversed(range(m))))
    # counting qubit j ends holding bit m-1-j of the phase; read it MSB first
    gates += [measure(q, m - 1 - q) for q in range(m)]
    return route_linear(Circuit(n, gates, m, f"qpe{n}"))


def adder4(theta: float = math.pi / 2) -> Circuit:
    """One-bit full adder on (a, b, cin, cout) with rotated inputs.

    Inputs are prepared by Ry(theta) so idling qubits carry phase-sensitive
    superpositions; ``cin`` ends holding the sum bit and ``cout`` the carry.
    """
    a, b, cin, cout = 0, 1, 2, 3
    gates = [ry(a, theta), ry(b, theta), ry(cin, theta)]
    gates += toffoli(a, b, cout) + [cx(a, b)] + toffoli(b, cin, cout) + [cx(b, cin)]
    gates += [measure(q, q) for q in range(4)]
    return route_linear(Circuit(4, gates, 4, "adder4"))


@lru_cache(maxsize=1)
def load_benchmarks() -> dict[str, Circuit]:
    """The shipped benchmark suite, keyed by name."""
    return {
        "bv4": bv("101"),
        "bv6": bv("11011"),
        "bv7": bv("110101"),
        "qft6": qft(6, 45, input="fourier"),
        "qaoa6": qaoa_ring(6),
        "qpe5": qpe(5),
        "adder4": adder4(),
    }


def benchmark(name: str) -> Circuit:
    suite = load_benchmarks()
    if name not in suite:
        raise KeyError(f"unknown benchmark {name!r}; choose from {', '.join(suite)}")
    return suite[name]
