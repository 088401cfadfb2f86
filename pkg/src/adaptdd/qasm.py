"""OpenQASM 2.0 subset reader/writer.

Grammar (one statement per ``;``, ``//`` comments)::

    program   := "OPENQASM 2.0;" [include] decl* stmt*
    include   := 'include "qelib1.inc";'            (accepted, ignored)
    decl      := "qreg" ID "[" INT "]" ";" | "creg" ID "[" INT "]" ";"
    stmt      := NAME ["(" expr ("," expr)* ")"] arg ("," arg)* ";"
               | "measure" arg "->" arg ";"
    arg       := ID ["[" INT "]"]                   (bare ID = whole register)
    expr      := numbers, ``pi``, + - * /, unary minus, parentheses

Gate names: x y z h s sdg sx rz u1 u2 u3 cx measure barrier, plus the
``delay(<ns>) q[i];`` extension. ``u``, ``p``, ``rx``, ``ry`` and ``CX`` are
read as aliases of u3, u1, u3, u3 and cx. Anything else is rejected.
"""
from __future__ import annotations

import math
import re

from .circuit import Circuit, Gate, GateKind, N_PARAMS, rx, ry

__all__ = ["QasmError", "parse_qasm", "serialize_qasm"]


class QasmError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col


_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+|//[^\n]*)
   |(?P<nl>\n)
   |(?P<num>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)
   |(?P<id>[A-Za-z_][A-Za-z0-9_]*)
   |(?P<str>"[^"\n]*")
   |(?P<arrow>->)
   |(?P<op>[\[\]();,+\-*/^])
    """,
    re.VERBOSE,
)

_NAMES = {k.value: k for k in GateKind if k is not GateKind.MEASURE}
_ALIASES = {"CX": GateKind.CNOT, "u": GateKind.U3, "p": GateKind.U1}


class _Tokens:
    def __init__(self, text: str):
        self.toks: list[tuple[str, str, int, int]] = []
        line, start, pos = 1, 0, 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None:
                raise QasmError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
            kind = m.lastgroup
            if kind == "nl":
                line, start = line + 1, m.end()
            elif kind != "ws":
                self.toks.append((kind, m.group(), line, m.start() - start + 1))
            pos = m.end()
        self.i = 0
        self.eof = ("eof", "", line, pos - start + 1)

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else self.eof

    def next(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, value: str | None = None, kind: str | None = None):
        tok = self.next()
        if (value is not None and tok[1] != value) or (kind is not None and tok[0] != kind):
            want = value if value is not None else kind
            got = tok[1] or "end of input"
            raise QasmError(f"expected {want!r}, got {got!r}", tok[2], tok[3])
        return tok

    def accept(self, value: str) -> bool:
        if self.peek()[1] == value and self.peek()[0] != "str":
            self.i += 1
            return True
        return False


def _expr(t: _Tokens) -> float:
    val = _term(t)
    while t.peek()[1] in "+-" and t.peek()[0] == "op":
        op = t.next()[1]
        rhs = _term(t)
        val = val + rhs if op == "+" else val - rhs
    return val


def _term(t: _Tokens) -> float:
    val = _unary(t)
    while t.peek()[1] in ("*", "/") and t.peek()[0] == "op":
        op = t.next()
        rhs = _unary(t)
        if op[1] == "*":
            val *= rhs
        elif rhs == 0:
            raise QasmError("division by zero", op[2], op[3])
        else:
            val /= rhs
    return val


def _unary(t: _Tokens) -> float:
    if t.accept("-"):
        return -_unary(t)
    if t.accept("+"):
        return _unary(t)
    return _atom(t)


def _atom(t: _Tokens) -> float:
    tok = t.next()
    if tok[0] == "num":
        return float(tok[1])
    if tok[0] == "id" and tok[1] == "pi":
        return math.pi
    if tok[1] == "(":
        val = _expr(t)
        t.expect(")")
        return val
    raise QasmError(f"bad expression token {tok[1] or 'end of input'!r}", tok[2], tok[3])


def parse_qasm(text: str) -> Circuit:
    """Parse the supported OpenQASM 2.0 dialect into a :class:`Circuit`."""
    t = _Tokens(text)
    tok = t.expect("OPENQASM")
    ver = t.expect(kind="num")
    if ver[1] not in ("2.0", "2"):
        raise QasmError(f"unsupported version {ver[1]}", ver[2], ver[3])
    t.expect(";")
    qreg: tuple[str, int] | None = None
    creg: tuple[str, int] | None = None
    gates: list[Gate] = []

    def operand(reg, what):
        name = t.expect(kind="id")
        if reg is None or name[1] != reg[0]:
            raise QasmError(f"unknown {what} register {name[1]!r}", name[2], name[3])
        if t.accept("["):
            idx = t.expect(kind="num")
            t.expect("]")
            if not idx[1].isdigit() or int(idx[1]) >= reg[1]:
                raise QasmError(f"operand out of range: {name[1]}[{idx[1]}]", idx[2], idx[3])
            return [int(idx[1])]
        return list(range(reg[1]))

    while t.peek()[0] != "eof":
        tok = t.next()
        word, line, col = tok[1], tok[2], tok[3]
        if tok[0] != "id":
            raise QasmError(f"unexpected {word!r}", line, col)
        if word == "include":
            t.expect(kind="str")
            t.expect(";")
            continue
        if word in ("qreg", "creg"):
            name = t.expect(kind="id")
            t.expect("[")
            size = t.expect(kind="num")
            t.expect("]")
            t.expect(";")
            if (qreg if word == "qreg" else creg) is not None:
                raise QasmError(f"duplicate register declaration {name[1]!r}", name[2], name[3])
            if not size[1].isdigit() or int(size[1]) < 1:
                raise QasmError(f"bad register size {size[1]}", size[2], size[3])
            if word == "qreg":
                qreg = (name[1], int(size[1]))
            else:
                creg = (name[1], int(size[1]))
            continue
        if qreg is None:
            raise QasmError(f"{word!r} before qreg declaration", line, col)
        if word == "measure":
            qs = operand(qreg, "quantum")
            t.expect("->")
            cs = operand(creg, "classical")
            t.expect(";")
            if len(qs) != len(cs):
                raise QasmError("measure register sizes differ", line, col)
            gates.extend(Gate(GateKind.MEASURE, (q,), clbits=(c,)) for q, c in zip(qs, cs))
            continue
        if word in ("rx", "ry"):
            kind, alias = GateKind.U3, word
        elif word in _NAMES or word in _ALIASES:
            kind, alias = _NAMES.get(word) or _ALIASES[word], None
        else:
            raise QasmError(f"unknown gate {word!r}", line, col)
        params: list[float] = []
        if t.accept("("):
            params.append(_expr(t))
            while t.accept(","):
                params.append(_expr(t))
            t.expect(")")
        args = [operand(qreg, "quantum")]
        while t.accept(","):
            args.append(operand(qreg, "quantum"))
        t.expect(";")
        want = 1 if alias else N_PARAMS.get(kind, 0)
        if len(params) != want:
            raise QasmError(f"{word} takes {want} parameters, got {len(params)}", line, col)
        try:
            if kind is GateKind.BARRIER:
                gates.append(Gate(kind, tuple(q for a in args for q in a)))
                continue
            width = max(len(a) for a in args)
            if any(len(a) not in (1, width) for a in args):
                raise QasmError("register arguments of different sizes", line, col)
            for j in range(width):
                qs = tuple(a[0] if len(a) == 1 else a[j] for a in args)
                if alias and len(qs) == 1:
                    gates.append((ry if alias == "ry" else rx)(qs[0], params[0]))
                else:
                    gates.append(Gate(kind, qs, tuple(params)))
        except ValueError as exc:
            if isinstance(exc, QasmError):
                raise
            raise QasmError(str(exc), line, col) from None
    if qreg is None:
        tok = t.eof
        raise QasmError("missing qreg declaration", tok[2], tok[3])
    try:
        return Circuit(qreg[1], tuple(gates), creg[1] if creg else 0)
    except ValueError as exc:
        raise QasmError(str(exc), tok[2], tok[3]) from None


def _num(v: float) -> str:
    if float(v).is_integer() and abs(v) < 1e15:
        return str(int(v))
    return repr(float(v))


def serialize_qasm(c: Circuit) -> str:
    """Write a circuit in the dialect accepted by :func:`parse_qasm`."""
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";', f"qreg q[{c.num_qubits}];"]
    if c.num_clbits:
        lines.append(f"creg c[{c.num_clbits}];")
    for g in c.gates:
        if g.kind is GateKind.MEASURE:
            lines.append(f"measure q[{g.qubits[0]}] -> c[{g.clbits[0]}];")
            continue
        args = f"({','.join(_num(p) for p in g.params)})" if g.params else ""
        ops = ",".join(f"q[{q}]" for q in g.qubits)
        lines.append(f"{g.kind.value}{args} {ops};")
    return "\n".join(lines) + "\n"
