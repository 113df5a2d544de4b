"""Text formats: presentation files and algebra-element literals.

Presentation files are line oriented::

    # G(4,3)
    gens: x y z
    orders: 16 8 4
    conj y^x = y z
    conj z^x = z^-1
    conj z^y = z^-1

``pow g = <word>`` sets the power relation of ``g`` (trivial by default);
``conj h^g = <word>`` sets the conjugate of ``h`` by an earlier generator
``g`` (``h`` and ``g`` commute by default).  Right-hand sides are words in
normal-form order; negative exponents are reduced modulo the relative
order.

Algebra literals follow the usual notation, e.g. ``b(a+b+ab)c`` or
``b*(a+b+a*b)*c``: ``+`` is the sum, juxtaposition or ``*`` the product,
``^k`` a power (negative powers invert units), ``1`` and ``0`` constants.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .galgebra import AlgebraElement, GroupAlgebra
from .pcgroup import PcPresentation, PresentationError, consistency_check


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = 1, column: int = 1, token: str | None = None):
        self.message = message
        self.line = line
        self.column = column
        self.token = token
        if line is None:
            super().__init__(message)
            return
        where = f"line {line}, column {column}"
        if token is not None:
            where += f" near {token!r}"
        super().__init__(f"{where}: {message}")


class InconsistentPresentation(ParseError):
    def __init__(self, failures: list[str]):
        self.failures = failures
        super().__init__("inconsistent presentation: " + "; ".join(failures), line=None)


@dataclass
class PresentationDoc:
    presentation: PcPresentation
    # rule key -> (line, column) of its definition
    spans: dict = field(default_factory=dict)


def _parse_word(text: str, offset: int, lineno: int, names: list[str], orders: list[int]):
    """Parse a normal-form word into an exponent vector."""
    exps = [0] * len(names)
    last = -1
    body = text.replace("*", " ")
    for mt in re.finditer(r"\S+", body):
        tok = mt.group()
        col = offset + mt.start() + 1
        if tok == "1":
            continue
        m = re.fullmatch(r"([A-Za-z_][A-Za-z0-9_]*)(?:\^(-?\d+))?", tok)
        if not m:
            raise ParseError("malformed word token", lineno, col, tok)
        name, e = m.group(1), int(m.group(2) or 1)
        if name not in names:
            raise ParseError(f"unknown generator {name!r}", lineno, col, tok)
        i = names.index(name)
        if i <= last:
            raise ParseError("word is not in normal-form order", lineno, col, tok)
        o = orders[i]
        if not -o < e < o:
            raise ParseError(f"exponent {e} not reduced below relative order {o}", lineno, col, tok)
        exps[i] = e % o
        last = i
    return tuple(exps)


def parse_presentation_file(text: str, check: bool = True) -> PresentationDoc:
    names: list[str] | None = None
    orders: list[int] | None = None
    powers: dict[int, tuple] = {}
    conjs: dict[tuple[int, int], tuple] = {}
    spans: dict = {}
    pending = []

    lines = text.splitlines()
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        col0 = len(line) - len(line.lstrip()) + 1
        stripped = line.strip()
        if stripped.startswith("gens:"):
            if names is not None:
                raise ParseError("duplicate gens line", lineno, col0, "gens:")
            names = stripped[5:].split()
            if not names:
                raise ParseError("no generators given", lineno, col0, "gens:")
            for nm in names:
                if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", nm):
                    raise ParseError("bad generator name", lineno, line.find(nm) + 1, nm)
            if len(set(names)) != len(names):
                raise ParseError("repeated generator name", lineno, col0, "gens:")
            spans["gens"] = (lineno, col0)
        elif stripped.startswith("orders:"):
            if names is None:
                raise ParseError("orders given before gens", lineno, col0, "orders:")
            toks = stripped[7:].split()
            orders = []
            for tok in toks:
                col = line.find(tok, col0) + 1
                if not tok.isdigit():
                    raise ParseError("relative order must be a positive integer", lineno, col, tok)
                o = int(tok)
                if o < 2 or o & (o - 1):
                    raise ParseError(f"relative order {o} is not a power of 2", lineno, col, tok)
                orders.append(o)
            if len(orders) != len(names):
                raise ParseError(f"expected {len(names)} orders, found {len(orders)}", lineno, col0, "orders:")
            spans["orders"] = (lineno, col0)
        elif stripped.startswith(("pow ", "conj ")):
            pending.append((lineno, line, col0))
        else:
            raise ParseError("expected gens:, orders:, pow or conj", lineno, col0, stripped.split()[0])

    if names is None:
        raise ParseError("missing gens line", 1, 1)
    if orders is None:
        raise ParseError("missing orders line", 1, 1)

    for lineno, line, col0 in pending:
        kw, rest = line.strip().split(None, 1)
        if "=" not in rest:
            raise ParseError("missing '='", lineno, col0, kw)
        lhs, rhs = rest.split("=", 1)
        rhs_offset = line.index("=") + 1
        lhs = lhs.strip()
        lhs_col = line.index(lhs, col0 - 1 + len(kw)) + 1
        if kw == "pow":
            m = re.fullmatch(r"([A-Za-z_][A-Za-z0-9_]*)(?:\^(\d+))?", lhs)
            if not m or m.group(1) not in names:
                raise ParseError("bad power relation left-hand side", lineno, lhs_col, lhs)
            i = names.index(m.group(1))
            if m.group(2) is not None and int(m.group(2)) != orders[i]:
                raise ParseError("power relation must use the relative order", lineno, lhs_col, lhs)
            if ("pow", i) in spans:
                raise ParseError("duplicate power relation", lineno, lhs_col, lhs)
            vec = _parse_word(rhs, rhs_offset, lineno, names, orders)
            if any(vec[: i + 1]):
                raise ParseError("power relation may only involve later generators", lineno, rhs_offset + 1, rhs.strip())
            if any(vec):
                powers[i] = vec
            spans[("pow", i)] = (lineno, col0)
        else:
            m = re.fullmatch(r"([A-Za-z_][A-Za-z0-9_]*)\^([A-Za-z_][A-Za-z0-9_]*)", lhs)
            if not m:
                raise ParseError("conjugation left-hand side must look like h^g", lineno, lhs_col, lhs)
            h, g = m.groups()
            for nm in (h, g):
                if nm not in names:
                    raise ParseError(f"unknown generator {nm!r}", lineno, lhs_col, lhs)
            i, j = names.index(g), names.index(h)
            if not i < j:
                raise ParseError("conjugating generator must come first", lineno, lhs_col, lhs)
            if ("conj", i, j) in spans:
                raise ParseError("duplicate conjugation relation", lineno, lhs_col, lhs)
            vec = _parse_word(rhs, rhs_offset, lineno, names, orders)
            if any(vec[:j]):
                raise ParseError("conjugate may only involve later generators", lineno, rhs_offset + 1, rhs.strip())
            if vec != tuple(int(t == j) for t in range(len(names))):
                conjs[(i, j)] = vec
            spans[("conj", i, j)] = (lineno, col0)

    try:
        p = PcPresentation(tuple(names), tuple(orders), powers, conjs)
    except PresentationError as exc:
        raise ParseError(str(exc), 1, 1) from None
    if check:
        ok, failures = consistency_check(p)
        if not ok:
            raise InconsistentPresentation(failures)
    return PresentationDoc(p, spans)


def format_presentation(p: PcPresentation, comment: str | None = None) -> str:
    names = p.generator_names
    out = []
    if comment:
        out.append(f"# {comment}")
    out.append("gens: " + " ".join(names))
    out.append("orders: " + " ".join(str(o) for o in p.relative_orders))

    def word(vec):
        toks = [n if e == 1 else f"{n}^{e}" for n, e in zip(names, vec) if e]
        return " ".join(toks) or "1"

    for i in sorted(p.power_rules):
        if any(p.power_rules[i]):
            out.append(f"pow {names[i]} = {word(p.power_rules[i])}")
    for i, j in sorted(p.conjugation_rules):
        out.append(f"conj {names[j]}^{names[i]} = {word(p.conjugation_rules[(i, j)])}")
    return "\n".join(out) + "\n"


# -- algebra literals -----------------------------------------------------

class _Literal:
    def __init__(self, text: str, kG: GroupAlgebra):
        self.text = text
        self.kG = kG
        self.names = sorted(kG.group.generator_names, key=len, reverse=True)
        self.toks = self._tokenize()
        self.pos = 0

    def _tokenize(self):
        toks = []
        i = 0
        s = self.text
        while i < len(s):
            ch = s[i]
            if ch.isspace():
                i += 1
            elif ch in "+*()^":
                toks.append((ch, i))
                i += 1
            elif ch == "-" or ch.isdigit():
                m = re.match(r"-?\d+", s[i:])
                if not m:
                    raise ParseError("unexpected character", 1, i + 1, ch)
                toks.append((m.group(), i))
                i += m.end()
            else:
                for nm in self.names:
                    if s.startswith(nm, i):
                        toks.append((nm, i))
                        i += len(nm)
                        break
                else:
                    raise ParseError("unknown generator", 1, i + 1, s[i:].split()[0][:8])
        return toks

    def peek(self):
        return self.toks[self.pos][0] if self.pos < len(self.toks) else None

    def take(self, expected=None):
        if self.pos >= len(self.toks):
            raise ParseError("unexpected end of input", 1, len(self.text) + 1)
        tok, at = self.toks[self.pos]
        if expected is not None and tok != expected:
            raise ParseError(f"expected {expected!r}", 1, at + 1, tok)
        self.pos += 1
        return tok, at

    def parse(self) -> AlgebraElement:
        if not self.toks:
            raise ParseError("empty expression", 1, 1)
        val = self.expr()
        if self.pos != len(self.toks):
            tok, at = self.toks[self.pos]
            raise ParseError("trailing input", 1, at + 1, tok)
        return val

    def expr(self):
        val = self.term()
        while self.peek() == "+":
            self.take()
            val = val + self.term()
        return val

    def _starts_factor(self, tok):
        return tok is not None and (tok == "(" or tok in self.names or tok.lstrip("-").isdigit())

    def term(self):
        val = self.factor()
        while True:
            tok = self.peek()
            if tok == "*":
                self.take()
                val = val * self.factor()
            elif self._starts_factor(tok):
                val = val * self.factor()
            else:
                return val

    def factor(self):
        tok, at = self.take()
        exp = None
        if tok == "(":
            base = self.expr()
            self.take(")")
        elif tok in self.names:
            base = tok
        elif tok in ("0", "1"):
            base = self.kG.one if tok == "1" else self.kG.zero
        else:
            raise ParseError("expected a generator, constant or '('", 1, at + 1, tok)
        if self.peek() == "^":
            self.take()
            etok, eat = self.take()
            if not etok.lstrip("-").isdigit():
                raise ParseError("exponent must be an integer", 1, eat + 1, etok)
            exp = int(etok)
        if isinstance(base, str):
            p = self.kG.group
            return self.kG.embed(p.collect([(base, 1 if exp is None else exp)]))
        if exp is None:
            return base
        try:
            return base**exp
        except ArithmeticError as exc:
            raise ParseError(str(exc), 1, at + 1, tok) from None


def parse_algebra_literal(text: str, kG: GroupAlgebra) -> AlgebraElement:
    return _Literal(text, kG).parse()
