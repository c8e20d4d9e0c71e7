"""Bra-ket formula parsing and printing.

Grammar (whitespace insignificant)::

    expr    := term (('+'|'-') term)*
    term    := factor+
    factor  := coeff? (ket | group) ('/' divisor)*
    group   := '(' expr ')' ('@[' int (',' int)* ']')?
    ket     := '|' [01]+ '>'
    divisor := 'sqrt' number | number
    coeff   := number ['i'] | 'i' | 'sqrt' number | '(' coeff-expr ')'

where a parenthesized coefficient may use + - * / and 'i' (so "(1/sqrt2)"
and "(-0.5+0.3i)" are coefficients; parentheses containing a '|' are
subexpressions).

Qubit positions in a ket string map left-to-right to ascending qubit
indices.  Within a product, factors claim positions left to right: a
"@[i,j]" suffix claims those positions explicitly, and a plain factor of
width w takes the w lowest unclaimed ones.  The "@" suffix is what lets a
printed tree express branches whose qubits cross, e.g. partitions 12|34
and 13|24 in one sum.
"""

from __future__ import annotations

import re as _re
from dataclasses import dataclass, field

from .errors import BraketSyntaxError, QubitCoverage
from .tree import (
    Leaf,
    Prod,
    Sum,
    TreeNode,
    canonical,
    is_leaf,
    qubits,
    scale_tree,
    structural_key,
    validate,
)

_TOKEN_RE = _re.compile(
    r"\s*(?:(?P<ket>\|[01]+>)"
    r"|(?P<number>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<sqrt>sqrt)"
    r"|(?P<imag>[ij])"
    r"|(?P<punct>[()+\-*/@\[\],]))"
)


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            raise BraketSyntaxError(f"unexpected character {stripped[0]!r}", pos)
        for kind in ("ket", "number", "sqrt", "imag", "punct"):
            val = m.group(kind)
            if val is not None:
                tokens.append((kind if kind != "punct" else val, val, m.start(kind)))
                break
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


@dataclass
class _RawKet:
    bits: str
    coeff: complex

    @property
    def width(self):
        return len(self.bits)


@dataclass
class _RawGroup:
    expr: "_RawExpr"
    at: tuple | None
    coeff: complex

    @property
    def width(self):
        return len(self.at) if self.at is not None else self.expr.width


@dataclass
class _RawTerm:
    factors: list
    sign: complex = 1.0


@dataclass
class _RawExpr:
    terms: list
    width: int = field(default=0)


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind):
        tok = self.next()
        if tok[0] != kind:
            raise BraketSyntaxError(f"expected {kind!r}, found {tok[1]!r}", tok[2])
        return tok

    # -- coefficient sub-language ------------------------------------------
    def _paren_is_coeff(self) -> bool:
        """A '(' opens a coefficient iff its balanced span contains no ket."""
        depth = 0
        for kind, _val, _pos in self.tokens[self.i :]:
            if kind == "(":
                depth += 1
            elif kind == ")":
                depth -= 1
                if depth == 0:
                    return True
            elif kind == "ket" and depth >= 1:
                return False
            elif kind == "end":
                break
        raise BraketSyntaxError("unbalanced parenthesis", self.peek()[2])

    def _num_atom(self) -> complex:
        kind, val, pos = self.peek()
        if kind == "number":
            self.next()
            if self.peek()[0] == "imag":
                self.next()
                return 1j * float(val)
            return complex(float(val))
        if kind == "imag":
            self.next()
            return 1j
        if kind == "sqrt":
            self.next()
            root = self.expect("number")
            return complex(float(root[1]) ** 0.5)
        if kind == "(":
            self.next()
            out = self._num_expr()
            self.expect(")")
            return out
        raise BraketSyntaxError(f"expected a number, found {val!r}", pos)

    def _num_term(self) -> complex:
        out = self._num_atom()
        while self.peek()[0] in ("*", "/"):
            op = self.next()[0]
            rhs = self._num_atom()
            out = out * rhs if op == "*" else out / rhs
        return out

    def _num_expr(self) -> complex:
        sign = 1.0
        while self.peek()[0] in ("+", "-"):
            if self.next()[0] == "-":
                sign = -sign
        out = sign * self._num_term()
        while self.peek()[0] in ("+", "-"):
            op = self.next()[0]
            rhs = self._num_term()
            out = out + rhs if op == "+" else out - rhs
        return out

    # -- formula grammar ----------------------------------------------------
    def _at_suffix(self):
        if self.peek()[0] != "@":
            return None
        self.next()
        self.expect("[")
        positions = [int(self.expect("number")[1])]
        while self.peek()[0] == ",":
            self.next()
            positions.append(int(self.expect("number")[1]))
        self.expect("]")
        return tuple(positions)

    def _factor(self):
        coeff = complex(1.0)
        kind = self.peek()[0]
        if kind in ("number", "imag", "sqrt") or (kind == "(" and self._paren_is_coeff()):
            coeff = self._num_term()
            kind = self.peek()[0]
        if kind == "ket":
            tok = self.next()
            raw = _RawKet(tok[1][1:-1], coeff)
        elif kind == "(":
            self.next()
            inner = self._expr()
            self.expect(")")
            at = self._at_suffix()
            if at is not None and len(at) != inner.width:
                raise BraketSyntaxError(
                    f"@-list has {len(at)} positions for a width-{inner.width} subexpression",
                    self.peek()[2],
                )
            raw = _RawGroup(inner, at, coeff)
        else:
            tok = self.peek()
            raise BraketSyntaxError(f"expected a ket or '(', found {tok[1]!r}", tok[2])
        while self.peek()[0] == "/":
            self.next()
            raw.coeff = raw.coeff / self._num_atom()
        return raw

    def _term(self) -> _RawTerm:
        factors = [self._factor()]
        while self.peek()[0] in ("ket", "number", "imag", "sqrt", "("):
            factors.append(self._factor())
        return _RawTerm(factors)

    def _expr(self) -> _RawExpr:
        terms = [self._term()]
        while self.peek()[0] in ("+", "-"):
            sign = 1.0 if self.next()[0] == "+" else -1.0
            term = self._term()
            term.sign = sign
            terms.append(term)
        expr = _RawExpr(terms)
        expr.width = _assign_positions(expr, self.peek()[2])
        return expr


def _assign_positions(expr: _RawExpr, errpos: int) -> int:
    """Claim term-local positions for every factor; all terms must agree."""
    cover = None
    for term in expr.terms:
        claimed: set[int] = set()
        for factor in term.factors:
            at = factor.at if isinstance(factor, _RawGroup) else None
            if at is not None:
                if len(set(at)) != len(at) or claimed & set(at) or min(at) < 1:
                    raise BraketSyntaxError(f"bad @-positions {list(at)}", errpos)
                factor.positions = at
                claimed |= set(at)
            else:
                positions = []
                candidate = 1
                while len(positions) < factor.width:
                    if candidate not in claimed:
                        positions.append(candidate)
                    candidate += 1
                factor.positions = tuple(positions)
                claimed |= set(positions)
        if claimed != set(range(1, len(claimed) + 1)):
            raise BraketSyntaxError(f"positions {sorted(claimed)} are not contiguous from 1", errpos)
        if cover is None:
            cover = claimed
        elif claimed != cover:
            raise BraketSyntaxError("terms of a sum cover different qubit positions", errpos)
    return len(cover)


def _build(node, slots: tuple) -> TreeNode:
    """Turn a raw node into a TreeNode given global qubits for local slots."""
    if isinstance(node, _RawKet):
        leaves = [
            Leaf(slots[i], node.coeff if i == 0 else 1.0, 0.0)
            if bit == "0"
            else Leaf(slots[i], 0.0, node.coeff if i == 0 else 1.0)
            for i, bit in enumerate(node.bits)
        ]
        return leaves[0] if len(leaves) == 1 else Prod(tuple(leaves))
    if isinstance(node, _RawGroup):
        # ``slots`` already reflects this group's claimed positions (in
        # @-list order when explicit).
        built = _build(node.expr, slots)
        return scale_tree(built, node.coeff) if node.coeff != 1.0 else built
    if isinstance(node, _RawTerm):
        children = []
        for factor in node.factors:
            sub_slots = tuple(slots[p - 1] for p in factor.positions)
            children.append(_build(factor, sub_slots))
        built = children[0] if len(children) == 1 else Prod(tuple(children))
        return scale_tree(built, node.sign) if node.sign != 1.0 else built
    # _RawExpr
    terms = [_build(t, slots) for t in node.terms]
    return terms[0] if len(terms) == 1 else Sum(tuple(terms))


def parse_braket(text: str) -> TreeNode:
    """Parse a bra-ket formula into a canonical tree over qubits 1..n."""
    parser = _Parser(text)
    expr = parser._expr()
    tok = parser.peek()
    if tok[0] != "end":
        raise BraketSyntaxError(f"trailing input {tok[1]!r}", tok[2])
    tree = canonical(_build(expr, tuple(range(1, expr.width + 1))))
    validate(tree)
    if qubits(tree) != frozenset(range(1, expr.width + 1)):
        raise QubitCoverage("formula does not cover a contiguous qubit range")
    return tree


# ---------------------------------------------------------------------------
# Printing.  parse(print(t)) == t for canonical trees; "@[...]"
# annotations appear only where the default left-to-right position
# assignment would not reproduce the tree's qubit labeling.

def _fmt_real(x: float) -> str:
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return repr(x)


def _fmt_coeff(z: complex) -> str:
    """Coefficient prefix for a ket; '' when the factor is 1."""
    z = complex(z)
    if z == 1:
        return ""
    if z.imag == 0:
        return _fmt_real(z.real) if z.real >= 0 else f"({_fmt_real(z.real)})"
    if z.real == 0:
        return f"{_fmt_real(z.imag)}i" if z.imag >= 0 else f"({_fmt_real(z.imag)}i)"
    sign = "+" if z.imag >= 0 else "-"
    return f"({_fmt_real(z.real)}{sign}{_fmt_real(abs(z.imag))}i)"


def _leaf_parts(leaf: Leaf):
    """(bit, coeff) when the leaf is along a basis axis, else None."""
    if complex(leaf.b) == 0:
        return "0", complex(leaf.a)
    if complex(leaf.a) == 0:
        return "1", complex(leaf.b)
    return None


def _print_expr(node: TreeNode, slots: tuple) -> str:
    terms = node.children if isinstance(node, Sum) else (node,)
    return " + ".join(_print_term(t, slots) for t in terms)


def _print_term(node: TreeNode, slots: tuple) -> str:
    children = node.children if isinstance(node, Prod) else (node,)
    local = {q: i + 1 for i, q in enumerate(slots)}
    ordered = sorted(children, key=lambda c: min(local[q] for q in qubits(c)))

    # Merge runs of basis-aligned leaves at consecutive positions into kets.
    factors = []  # (positions ascending, kind, payload)
    run: list[tuple[int, Leaf]] = []

    def flush_run():
        if not run:
            return
        run.sort()
        coeff = complex(1.0)
        bits = ""
        for _pos, leaf in run:
            bit, c = _leaf_parts(leaf)
            bits += bit
            coeff *= c
        factors.append((tuple(p for p, _ in run), "ket", (bits, coeff)))
        run.clear()

    for child in ordered:
        pos = tuple(sorted(local[q] for q in qubits(child)))
        if is_leaf(child) and _leaf_parts(child) is not None:
            if run and pos[0] != run[-1][0] + 1:
                flush_run()
            run.append((pos[0], child))
        else:
            flush_run()
            factors.append((pos, "node", child))
    flush_run()

    out = []
    free = set(range(1, len(slots) + 1))
    for pos, kind, payload in factors:
        default = tuple(sorted(free)[: len(pos)])
        explicit = pos != default
        free -= set(pos)
        sub_slots = tuple(slots[p - 1] for p in pos)
        if kind == "ket":
            bits, coeff = payload
            text = f"{_fmt_coeff(coeff)}|{bits}>"
            if explicit:
                text = f"({text})@[{','.join(map(str, pos))}]"
        else:
            text = f"({_print_factor(payload, sub_slots)})"
            if explicit:
                text += f"@[{','.join(map(str, pos))}]"
        out.append(text)
    return "".join(out)


def _print_factor(node: TreeNode, slots: tuple) -> str:
    if is_leaf(node):
        # Superposed leaf: a|0> + b|1> with both parts present.
        a, b = complex(node.a), complex(node.b)
        return f"{_fmt_coeff(a)}|0> + {_fmt_coeff(b)}|1>"
    return _print_expr(node, slots)


def print_braket(tree: TreeNode) -> str:
    """Bra-ket string for a canonical tree; inverse of :func:`parse_braket`."""
    validate(tree)
    qs = sorted(qubits(tree))
    if qs != list(range(1, len(qs) + 1)):
        raise QubitCoverage(f"tree covers qubits {qs}, expected a contiguous range from 1")
    slots = tuple(qs)
    if is_leaf(tree) or isinstance(tree, Prod):
        return _print_term(tree, slots)
    return _print_expr(tree, slots)
