"""
Readers for the network DSL, the raw-matrix format and points files.

Network files (``.crn``)::

    # comment
    species: X1, X2            (optional; otherwise inferred)
    X1 + X2 -> 2 X2 ; k1
    X2 -> X1 ; k2
    A <=> B ; kf, kr
    kinetics:                  (optional exponent matrix, n rows of r entries)
    1 0
    1 1
    rates:                     (optional rate constants)
    1 2

Matrix files (``.mat``) use ``N:``, ``B:`` and optionally ``W:`` blocks of
rational rows, plus the optional ``species:`` header and ``rates:`` block.
Exponent entries may be identifiers (``b21``), which become positive symbols.
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .errors import BuildError, DimensionError, ParseError
from .exact import RationalMatrix
from .network import (
    Kinetics,
    Network,
    PowerLawSystem,
    Reaction,
    SymbolicMatrix,
    build_system,
    system_from_matrices,
)

NAME_RE = r"[A-Za-z_][A-Za-z0-9_]*"
RATIONAL_RE = re.compile(r"[+-]?(\d+(\.\d*)?|\.\d+)([eE](?P<exp>[+-]?\d+))?(/\d+)?$")
IDENT_RE = re.compile(NAME_RE + "$")
HEADER_RE = re.compile(r"^\s*(species|kinetics|rates|N|B|W)\s*:(.*)$")
BLOCKS = ("kinetics", "rates", "N", "B", "W")
MAX_DIGITS = 200
MAX_EXPONENT = 1000

_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)|(?P<rev><=>)|(?P<arrow>->)|(?P<number>\d+)|(?P<name>" + NAME_RE + r")"
    r"|(?P<plus>\+)|(?P<semi>;)|(?P<comma>,)"
)


@dataclass(frozen=True)
class Line:
    number: int
    raw: str
    text: str  # comment stripped


@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    column: int  # 1-based


@dataclass
class Block:
    name: str
    header: Line
    rows: List[Tuple[Line, str]]


@dataclass(frozen=True)
class ParsedDocument:
    """Everything read from one input file"""
    kind: str  # "network" or "matrix"
    system: PowerLawSystem
    network: Optional[Network] = None
    rates: Optional[Tuple[Fraction, ...]] = None
    source: Optional[str] = None


@dataclass(frozen=True)
class PointSpec:
    k: Tuple[Fraction, ...]
    x: Tuple[Fraction, ...]
    line: int


def _split_lines(text: str) -> List[Line]:
    lines = []
    for number, raw in enumerate(text.splitlines(), start=1):
        raw = raw.rstrip("\r")
        lines.append(Line(number, raw, raw.split("#", 1)[0]))
    return lines


def _error(message: str, line: Line, column: int) -> ParseError:
    column = max(1, min(column, len(line.raw) + 1))
    return ParseError(message, line.number, column, line.raw)


def _integer(token: Token, line: Line) -> int:
    if len(token.value) > MAX_DIGITS:
        raise _error("numeric literal out of range", line, token.column)
    return int(token.value)


def _tokenize(line: Line, offset: int = 0, stop: Optional[int] = None) -> List[Token]:
    text = line.text if stop is None else line.text[:stop]
    tokens = []
    position = offset
    while position < len(text):
        match = _TOKEN_RE.match(text, position)
        if not match:
            raise _error(f"unexpected character {text[position]!r}", line, position + 1)
        kind = match.lastgroup
        if kind != "ws":
            tokens.append(Token(kind, match.group(), position + 1))
        position = match.end()
    return tokens


# ---------------------------------------------------------------------------
# Reactions
# ---------------------------------------------------------------------------

class _ComplexReader:
    def __init__(self, line: Line, tokens: List[Token]):
        self.line = line
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Optional[Token]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> Token:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def end_column(self) -> int:
        return len(self.line.text.rstrip()) + 1

    def read_complex(self) -> List[Tuple[str, int, int]]:
        """Returns (species, coefficient, column) triples; [] for the empty complex."""
        token = self.peek()
        if token is None or token.kind in ("arrow", "rev", "semi"):
            column = token.column if token else self.end_column()
            raise _error("expected a complex", self.line, column)
        nxt = self.tokens[self.pos + 1] if self.pos + 1 < len(self.tokens) else None
        if token.kind == "number" and _integer(token, self.line) == 0 and (
                nxt is None or nxt.kind in ("arrow", "rev", "semi")):
            self.take()
            return []
        terms = [self.read_term()]
        while self.peek() is not None and self.peek().kind == "plus":
            plus = self.take()
            following = self.peek()
            if following is None or following.kind not in ("number", "name"):
                raise _error("dangling '+' in complex", self.line, plus.column)
            terms.append(self.read_term())
        return terms

    def read_term(self) -> Tuple[str, int, int]:
        token = self.take()
        coefficient = 1
        if token.kind == "number":
            coefficient = _integer(token, self.line)
            if coefficient == 0:
                raise _error("zero coefficient in complex", self.line, token.column)
            name = self.peek()
            if name is None or name.kind != "name":
                column = name.column if name else self.end_column()
                raise _error("expected a species name after coefficient", self.line, column)
            token = self.take()
        elif token.kind != "name":
            raise _error(f"unexpected {token.value!r} in complex", self.line, token.column)
        return token.value, coefficient, token.column


@dataclass
class _RawReaction:
    line: Line
    reactants: Dict[str, int]
    products: Dict[str, int]
    rate: Optional[Token]
    arrow_column: int


def _parse_reaction_line(line: Line, species_header: Optional[List[str]],
                         seen_species: List[str]) -> List[_RawReaction]:
    tokens = _tokenize(line)
    reader = _ComplexReader(line, tokens)
    left = reader.read_complex()
    arrow = reader.peek()
    if arrow is None or arrow.kind not in ("arrow", "rev"):
        column = arrow.column if arrow else reader.end_column()
        raise _error("expected '->' or '<=>'", line, column)
    reader.take()
    right = reader.read_complex()

    rates: List[Token] = []
    token = reader.peek()
    if token is not None:
        if token.kind != "semi":
            raise _error(f"unexpected {token.value!r} after complex", line, token.column)
        reader.take()
        while True:
            name = reader.peek()
            if name is None or name.kind != "name":
                column = name.column if name else reader.end_column()
                raise _error("expected a rate name", line, column)
            rates.append(reader.take())
            following = reader.peek()
            if following is None:
                break
            if following.kind != "comma":
                raise _error(f"unexpected {following.value!r} in rate list", line, following.column)
            reader.take()

    reversible = arrow.kind == "rev"
    expected = 2 if reversible else 1
    if rates and len(rates) != expected:
        raise _error(f"expected {expected} rate name(s), got {len(rates)}", line, rates[0].column)

    def collect(terms):
        coeffs: Dict[str, int] = {}
        for name, coefficient, column in terms:
            if species_header is not None and name not in species_header:
                raise _error(f"unknown species '{name}'", line, column)
            if name not in seen_species:
                seen_species.append(name)
            coeffs[name] = coeffs.get(name, 0) + coefficient
        return coeffs

    reactants, products = collect(left), collect(right)
    if reactants == products:
        raise _error("null reaction: reactant and product complexes are equal", line, arrow.column)

    forward = _RawReaction(line, reactants, products, rates[0] if rates else None, arrow.column)
    if not reversible:
        return [forward]
    backward = _RawReaction(line, products, reactants, rates[1] if rates else None, arrow.column)
    return [forward, backward]


def _parse_species_header(line: Line, rest_start: int) -> List[str]:
    names: List[str] = []
    for match in re.finditer(r"[^\s,]+", line.text[rest_start:]):
        column = rest_start + match.start() + 1
        if not IDENT_RE.match(match.group()):
            raise _error(f"invalid species name {match.group()!r}", line, column)
        if match.group() in names:
            raise _error(f"duplicate species '{match.group()}'", line, column)
        names.append(match.group())
    if not names:
        raise _error("empty species header", line, rest_start + 1)
    return names


def _scan(text: str) -> Tuple[Optional[Tuple[Line, List[str]]], List[Line], Dict[str, Block]]:
    """Split a document into the species header, reaction lines and blocks."""
    header: Optional[Tuple[Line, List[str]]] = None
    reactions: List[Line] = []
    blocks: Dict[str, Block] = {}
    current: Optional[Block] = None
    for line in _split_lines(text):
        if not line.text.strip():
            continue
        match = HEADER_RE.match(line.text)
        if match:
            name = match.group(1)
            rest_start = match.start(2)
            if name == "species":
                if header is not None:
                    raise _error("species header given twice", line, 1)
                if reactions or blocks:
                    raise _error("species header must come first", line, 1)
                header = (line, _parse_species_header(line, rest_start))
                current = None
                continue
            if name in blocks:
                raise _error(f"block '{name}:' given twice", line, 1)
            current = Block(name, line, [])
            blocks[name] = current
            if match.group(2).strip():
                current.rows.append((line, match.group(2)))
            continue
        if "->" in line.text or "<=>" in line.text:
            current = None
            reactions.append(line)
            continue
        if current is None:
            raise _error("expected a reaction or a block header", line,
                         len(line.text) - len(line.text.lstrip()) + 1)
        current.rows.append((line, line.text))
    return header, reactions, blocks


def _network_from_lines(header: Optional[Tuple[Line, List[str]]],
                        lines: Sequence[Line]) -> Network:
    species_header = header[1] if header else None
    seen: List[str] = []
    raw: List[_RawReaction] = []
    for line in lines:
        raw.extend(_parse_reaction_line(line, species_header, seen))
    if not raw:
        line = header[0] if header else Line(1, "", "")
        raise _error("no reactions found", line, 1)

    species = species_header if species_header is not None else seen
    explicit = {item.rate.value for item in raw if item.rate}
    names: List[str] = []
    reactions: List[Reaction] = []
    for j, item in enumerate(raw):
        if item.rate:
            rate = item.rate.value
        else:
            # default k<j+1>, moved past names the document uses
            index = j + 1
            while f"k{index}" in explicit or f"k{index}" in names:
                index += 1
            rate = f"k{index}"
        if rate in names:
            column = item.rate.column if item.rate else item.arrow_column
            raise _error(f"duplicate rate name '{rate}'", item.line, column)
        names.append(rate)
        reactions.append(Reaction(
            reactant_coeffs=tuple(item.reactants.get(s, 0) for s in species),
            product_coeffs=tuple(item.products.get(s, 0) for s in species),
            rate_symbol=rate,
        ))
    return Network(tuple(species), tuple(reactions))


def parse_network(text: str) -> Network:
    """
    Parse the reaction part of a network document.

    Raises:
        ParseError: On malformed complexes, unknown species (with a header),
            null reactions or duplicate rate names
    """
    header, reactions, _ = _scan(text)
    return _network_from_lines(header, reactions)


# ---------------------------------------------------------------------------
# Matrix blocks
# ---------------------------------------------------------------------------

def _parse_entry(token: str, line: Line, column: int, allow_symbols: bool) -> Union[Fraction, str]:
    match = RATIONAL_RE.match(token)
    if match:
        exponent = (match.group("exp") or "0").lstrip("+-").lstrip("0")
        if len(token) > MAX_DIGITS or len(exponent) > 4 or int(exponent or "0") > MAX_EXPONENT:
            raise _error("numeric literal out of range", line, column)
        try:
            return Fraction(token)
        except (ValueError, ZeroDivisionError):
            raise _error(f"invalid rational {token!r}", line, column)
    if allow_symbols and IDENT_RE.match(token):
        return token
    raise _error(f"unparseable rational {token!r}", line, column)


def _block_rows(block: Block, allow_symbols: bool = False) -> List[List[Union[Fraction, str]]]:
    rows = []
    width = None
    for line, segment in block.rows:
        offset = len(line.text) - len(segment)
        entries = []
        for match in re.finditer(r"[^\s,]+", segment):
            entries.append(_parse_entry(match.group(), line, offset + match.start() + 1, allow_symbols))
        if not entries:
            continue
        if width is not None and len(entries) != width:
            raise _error(f"row has {len(entries)} entries, previous rows have {width}", line, 1)
        width = len(entries)
        rows.append(entries)
    return rows


def _check_shape(block: Block, rows: List[list], nrows: Optional[int], ncols: Optional[int]):
    if nrows is not None and len(rows) != nrows:
        raise _error(f"block '{block.name}:' has {len(rows)} rows, expected {nrows}", block.header, 1)
    if ncols is not None and rows and len(rows[0]) != ncols:
        line = block.rows[0][0]
        raise _error(f"block '{block.name}:' has {len(rows[0])} columns, expected {ncols}", line, 1)


def _exponent_matrix(block: Block, n: int, r: int) -> Union[RationalMatrix, SymbolicMatrix]:
    rows = _block_rows(block, allow_symbols=True)
    _check_shape(block, rows, n, r)
    matrix = SymbolicMatrix(tuple(tuple(row) for row in rows), r)
    return matrix.to_rational() if matrix.is_numeric() else matrix


def _kinetics_block(text: str) -> Block:
    lines = [line for line in _split_lines(text) if line.text.strip()]
    if not lines:
        raise ParseError("empty kinetics block", 1, 1, "")
    match = HEADER_RE.match(lines[0].text)
    if match and match.group(1) == "kinetics":
        block = Block("kinetics", lines[0], [])
        if match.group(2).strip():
            block.rows.append((lines[0], match.group(2)))
        lines = lines[1:]
    else:
        block = Block("kinetics", lines[0], [])
    block.rows.extend((line, line.text) for line in lines)
    return block


def parse_kinetics(text: str, net: Network) -> RationalMatrix:
    """
    Parse an n x r block of rationals (optionally headed by 'kinetics:').

    Raises:
        ParseError: On a wrong shape or an unparseable rational
    """
    block = _kinetics_block(text)
    rows = _block_rows(block)
    _check_shape(block, rows, net.n, net.r)
    return RationalMatrix.from_rows(rows, ncols=net.r)


def parse_symbolic_kinetics(text: str, net: Network) -> Union[RationalMatrix, SymbolicMatrix]:
    """Like parse_kinetics, but identifiers become positive exponent symbols."""
    return _exponent_matrix(_kinetics_block(text), net.n, net.r)


def _rates(block: Optional[Block], r: int) -> Optional[Tuple[Fraction, ...]]:
    if block is None:
        return None
    rows = _block_rows(block)
    values = [v for row in rows for v in row]
    if len(values) != r:
        raise _error(f"rates block has {len(values)} values for {r} reactions", block.header, 1)
    if any(value <= 0 for value in values):
        raise _error("rate constants must be positive", block.header, 1)
    return tuple(values)


def load_document(text: str, source: Optional[str] = None) -> ParsedDocument:
    """
    Parse a network or matrix document into a ready-to-analyze system.

    Raises:
        ParseError: On any syntax problem (positions are 1-based)
        BuildError: When the parsed pieces do not form a valid system
    """
    try:
        header, reactions, blocks = _scan(text)
        name = Path(source).stem if source else ""
        if "N" in blocks:
            return _load_matrix_document(header, reactions, blocks, name, source)
        for forbidden in ("B", "W"):
            if forbidden in blocks:
                raise _error(f"block '{forbidden}:' only allowed in matrix files",
                             blocks[forbidden].header, 1)
        net = _network_from_lines(header, reactions)
        kinetics: Union[Kinetics, RationalMatrix, SymbolicMatrix] = Kinetics.MASS_ACTION
        if "kinetics" in blocks:
            kinetics = _exponent_matrix(blocks["kinetics"], net.n, net.r)
        system = build_system(net, kinetics, name=name)
        return ParsedDocument("network", system, net, _rates(blocks.get("rates"), net.r), source)
    except ParseError as exc:
        raise exc.with_source(source) if source else exc


def _load_matrix_document(header, reactions: List[Line], blocks: Dict[str, Block],
                          name: str, source: Optional[str]) -> ParsedDocument:
    if reactions:
        raise _error("reactions are not allowed in a matrix file", reactions[0], 1)
    if "kinetics" in blocks:
        raise _error("use 'B:' for the exponent matrix in matrix files", blocks["kinetics"].header, 1)
    if "B" not in blocks:
        raise _error("matrix file needs a 'B:' block", blocks["N"].header, 1)
    n_rows = _block_rows(blocks["N"])
    if not n_rows:
        raise _error("empty 'N:' block", blocks["N"].header, 1)
    r = len(n_rows[0])
    b_rows = _block_rows(blocks["B"], allow_symbols=True)
    if not b_rows:
        raise _error("empty 'B:' block", blocks["B"].header, 1)
    _check_shape(blocks["B"], b_rows, None, r)
    n = len(b_rows)
    species = header[1] if header else None
    if species is not None and len(species) != n:
        raise _error(f"{len(species)} species declared but B has {n} rows", header[0], 1)
    B = _exponent_matrix(blocks["B"], n, r)
    W = None
    if "W" in blocks:
        w_rows = _block_rows(blocks["W"])
        _check_shape(blocks["W"], w_rows, None, n)
        W = RationalMatrix.from_rows(w_rows, ncols=n)
    try:
        system = system_from_matrices(RationalMatrix.from_rows(n_rows), B, W,
                                      species=species, name=name)
    except DimensionError as exc:
        raise BuildError(str(exc)) from exc
    return ParsedDocument("matrix", system, None, _rates(blocks.get("rates"), r), source)


def load_file(path: Union[str, Path]) -> ParsedDocument:
    path = Path(path)
    return load_document(path.read_text(encoding="utf-8"), source=str(path))


# ---------------------------------------------------------------------------
# Points and pretty-printing
# ---------------------------------------------------------------------------

_POINT_RE = re.compile(r"^\s*k\s*:(?P<k>.*?)\bx\s*:(?P<x>.*)$")


def parse_points(text: str, system: PowerLawSystem) -> List[PointSpec]:
    """Lines 'k: <r rationals> x: <n rationals>'."""
    points = []
    for line in _split_lines(text):
        if not line.text.strip():
            continue
        match = _POINT_RE.match(line.text)
        if not match:
            raise _error("expected 'k: ... x: ...'", line, 1)
        values = {}
        for part, expected in (("k", system.r), ("x", system.n)):
            entries = []
            for token in re.finditer(r"[^\s,]+", match.group(part)):
                column = match.start(part) + token.start() + 1
                entries.append(_parse_entry(token.group(), line, column, allow_symbols=False))
            if len(entries) != expected:
                raise _error(f"'{part}:' has {len(entries)} values, expected {expected}",
                             line, match.start(part) + 1)
            values[part] = tuple(entries)
        points.append(PointSpec(values["k"], values["x"], line.number))
    return points


def _format_complex(coeffs: Sequence[int], species: Sequence[str]) -> str:
    parts = [name if c == 1 else f"{c} {name}" for c, name in zip(coeffs, species) if c]
    return " + ".join(parts) if parts else "0"


def format_network(net: Network) -> str:
    """Render a network in the DSL; parse_network inverts it exactly."""
    lines = ["species: " + ", ".join(net.species)]
    for reaction in net.reactions:
        lines.append(
            f"{_format_complex(reaction.reactant_coeffs, net.species)} -> "
            f"{_format_complex(reaction.product_coeffs, net.species)} ; {reaction.rate_symbol}"
        )
    return "\n".join(lines) + "\n"
