# cremona/parser.py
import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from string import Template
from typing import Dict, Iterator, List, NamedTuple, Optional, Tuple, Union

from cremona.errors import LabError, ParseError, UsageError
from cremona.polynomial import Polynomial
from cremona.projective import AffinePolyMap, ProjectiveMap

logger = logging.getLogger(__name__)

MAX_VARIABLE = 99

TOKEN_SPEC = [
    ("NUMBER", r"\d+"),
    ("NAME", r"[A-Za-z_][A-Za-z0-9_]*"),
    ("OP", r"[-+*/^()\[\]:,=]"),
    ("NEWLINE", r"\n"),
    ("SKIP", r"[ \t\r]+"),
    ("COMMENT", r"#[^\n]*"),
    ("MISMATCH", r"."),
]
TOKEN_RE = re.compile("|".join(f"(?P<{name}>{pattern})" for name, pattern in TOKEN_SPEC))
VARIABLE_RE = re.compile(r"X(0|[1-9][0-9]?)")
KEYWORDS = {"n", "map", "affine"}


class LogTemplates:
    FILE_LOADED = Template("Loaded $maps maps and $affine affine maps in P^$n from $source")


class Token(NamedTuple):
    type: str
    value: str
    line: int
    column: int


def tokenize(text: str) -> Iterator[Token]:
    line, line_start = 1, 0
    for match in TOKEN_RE.finditer(text):
        kind, value = match.lastgroup, match.group()
        column = match.start() - line_start + 1
        if kind == "NEWLINE":
            line, line_start = line + 1, match.end()
            continue
        if kind in ("SKIP", "COMMENT"):
            continue
        if kind == "MISMATCH":
            raise ParseError(f"unexpected character {value!r}", line, column)
        yield Token(kind, value, line, column)
    yield Token("END", "", line, len(text) - line_start + 1)


class _Parser:
    """Рекурсивный спуск по грамматике выражений"""

    def __init__(self, text: str):
        self.tokens = list(tokenize(text))
        self.pos = 0

    @property
    def token(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        token = self.tokens[self.pos]
        if token.type != "END":
            self.pos += 1
        return token

    def error(self, message: str, token: Optional[Token] = None) -> ParseError:
        token = token or self.token
        return ParseError(message, token.line, token.column)

    def accept(self, value: str) -> bool:
        if self.token.type == "OP" and self.token.value == value:
            self.advance()
            return True
        return False

    def expect(self, value: str) -> Token:
        if self.token.type == "OP" and self.token.value == value:
            return self.advance()
        found = self.token.value or "end of input"
        raise self.error(f"expected {value!r}, found {found!r}")

    def expect_number(self, what: str) -> int:
        if self.token.type != "NUMBER":
            raise self.error(f"expected {what}")
        return int(self.advance().value)

    # expr := term (('+' | '-') term)*
    def expression(self, n: int) -> Polynomial:
        result = self.term(n)
        while self.token.type == "OP" and self.token.value in "+-":
            op = self.advance().value
            right = self.term(n)
            result = result + right if op == "+" else result - right
        return result

    # term := unary ('*' unary)*
    def term(self, n: int) -> Polynomial:
        result = self.unary(n)
        while True:
            if self.accept("*"):
                result = result * self.unary(n)
            elif self.token.type in ("NUMBER", "NAME") or (
                    self.token.type == "OP" and self.token.value == "("):
                raise self.error("implicit multiplication is not allowed, use '*'")
            elif self.token.type == "OP" and self.token.value == "/":
                raise self.error("division is only allowed inside rational literals p/q")
            else:
                return result

    def unary(self, n: int) -> Polynomial:
        if self.accept("-"):
            return -self.unary(n)
        if self.accept("+"):
            return self.unary(n)
        return self.power(n)

    def power(self, n: int) -> Polynomial:
        base = self.atom(n)
        if self.accept("^"):
            if self.token.type == "OP" and self.token.value == "-":
                raise self.error("negative exponent")
            base = base ** self.expect_number("a non-negative integer exponent after '^'")
        return base

    def atom(self, n: int) -> Polynomial:
        token = self.token
        if token.type == "NUMBER":
            self.advance()
            value = Fraction(int(token.value))
            if self.accept("/"):
                if self.token.type != "NUMBER":
                    raise self.error("expected a denominator after '/'")
                denominator_token = self.advance()
                if int(denominator_token.value) == 0:
                    raise self.error("zero denominator", denominator_token)
                value /= int(denominator_token.value)
            return Polynomial.constant(n, value)
        if token.type == "NAME":
            match = VARIABLE_RE.fullmatch(token.value)
            if not match:
                raise self.error(f"unknown identifier {token.value!r}")
            index = int(match.group(1))
            if index > n:
                raise self.error(f"variable {token.value} is outside X0..X{n}")
            self.advance()
            return Polynomial.variable(n, index)
        if self.accept("("):
            inner = self.expression(n)
            self.expect(")")
            return inner
        found = token.value or "end of input"
        raise self.error(f"expected a number, a variable or '(', found {found!r}")


def parse_polynomial(text: str, n: int) -> Polynomial:
    """
    Разбор многочлена от X0..Xn
    Args:
        text: Выражение
        n: Размерность
    Returns:
        Polynomial: Точное значение
    Raises:
        ParseError: синтаксическая ошибка (со строкой и столбцом)
    """
    parser = _Parser(text)
    result = parser.expression(n)
    if parser.token.type != "END":
        raise parser.error(f"unexpected {parser.token.value!r} after the expression")
    return result


def _shrink(poly: Polynomial, m: int, token: Token) -> Polynomial:
    # переход от X0..X99 к X1..Xm
    terms = {}
    for exps, coeff in poly.terms.items():
        if exps[0] or any(exps[m + 1:]):
            raise ParseError(f"affine components may only use X1..X{m}", token.line, token.column)
        terms[exps[:m + 1]] = coeff
    return Polynomial(m, terms)


@dataclass
class MapFile:
    """
    Содержимое файла отображений
    Args:
        ambient_n: Размерность из заголовка 'n = <int>'
        maps: Проективные отображения по именам
        affine: Аффинные отображения по именам
    """
    ambient_n: int
    maps: Dict[str, ProjectiveMap] = field(default_factory=dict)
    affine: Dict[str, AffinePolyMap] = field(default_factory=dict)

    def get_map(self, name: str) -> ProjectiveMap:
        if name not in self.maps:
            raise UsageError(f"no map named {name!r}; known maps: {sorted(self.maps)}")
        return self.maps[name]

    def get_affine(self, name: str) -> AffinePolyMap:
        if name not in self.affine:
            raise UsageError(f"no affine map named {name!r}; known affine maps: {sorted(self.affine)}")
        return self.affine[name]


def parse_map_file(text: str, source: str = "<string>") -> MapFile:
    """
    Разбор файла: заголовок 'n = <int>', затем операторы
    'map NAME = [e0 : ... : en]' и 'affine NAME = (e1, ..., em)'
    """
    parser = _Parser(text)
    header = parser.token
    if header.type != "NAME" or header.value != "n":
        raise parser.error("map file must start with the header 'n = <int>'")
    parser.advance()
    parser.expect("=")
    n = parser.expect_number("the dimension after 'n ='")
    if n < 1 or n > MAX_VARIABLE:
        raise parser.error(f"dimension must be between 1 and {MAX_VARIABLE}, got {n}", header)
    result = MapFile(ambient_n=n)

    while parser.token.type != "END":
        keyword = parser.advance()
        if keyword.type != "NAME" or keyword.value not in ("map", "affine"):
            raise parser.error("expected 'map' or 'affine'", keyword)
        name_token = parser.advance()
        if name_token.type != "NAME" or name_token.value in KEYWORDS or VARIABLE_RE.fullmatch(name_token.value):
            raise parser.error("expected a map name", name_token)
        name = name_token.value
        if name in result.maps or name in result.affine:
            raise parser.error(f"duplicate name {name!r}", name_token)
        parser.expect("=")

        if keyword.value == "map":
            parser.expect("[")
            components = [parser.expression(n)]
            while parser.accept(":"):
                components.append(parser.expression(n))
            parser.expect("]")
            if len(components) != n + 1:
                raise parser.error(f"map {name} has {len(components)} components, expected {n + 1}", keyword)
            try:
                result.maps[name] = ProjectiveMap(components)
            except LabError as e:
                raise parser.error(f"map {name}: {e}", keyword) from e
        else:
            parser.expect("(")
            components = [parser.expression(MAX_VARIABLE)]
            while parser.accept(","):
                components.append(parser.expression(MAX_VARIABLE))
            parser.expect(")")
            m = len(components)
            result.affine[name] = AffinePolyMap([_shrink(c, m, keyword) for c in components])

    logger.debug(LogTemplates.FILE_LOADED.substitute(
        maps=len(result.maps), affine=len(result.affine), n=n, source=source))
    return result


def load_map_file(path: Union[str, Path]) -> MapFile:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read map file {path}: {e}") from e
    return parse_map_file(text, source=str(path))


def parse_points(text: str) -> List[Tuple[Fraction, ...]]:
    """Точки вида '0,0; 1,0; 0,1' (координаты целые или p/q)"""
    points = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            points.append(tuple(Fraction(x.strip()) for x in chunk.split(",")))
        except (ValueError, ZeroDivisionError) as e:
            raise ParseError(f"bad point {chunk!r}: {e}") from e
    if not points:
        raise ParseError("no points given")
    if len({len(p) for p in points}) != 1:
        raise ParseError("points have different dimensions")
    return points
