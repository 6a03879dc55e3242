import re
from dataclasses import dataclass

from .exceptions import AgentOutOfRange, FormulaSyntaxError
from .formula import (
    BOTTOM,
    RESERVED_VARIABLE,
    TOP,
    AgBox,
    AgDia,
    And,
    Atom,
    Box,
    Dia,
    Formula,
    NegAtom,
    Or,
    Ought,
    Perm,
    iff,
    implies,
    negate,
)

KEYWORDS = {"box", "dia", "true", "false"}

# Longest symbols first so that "<->" is not read as "<" "-" ">".
_TOKEN_RE = re.compile(
    r"\s*(?:(?P<nat>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<sym><->|->|[()&|!~\[\]<>]))"
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    position: int


def tokenize(text: str) -> list[Token]:
    """Split a formula text into tokens.

    Args:
        text (str): The formula text.

    Returns:
        list[Token]: The tokens, terminated by an `end` token.

    Raises:
        FormulaSyntaxError: If an unexpected character is found.
    """
    tokens = []
    index = 0
    while True:
        while index < len(text) and text[index].isspace():
            index += 1
        if index >= len(text):
            break
        match = _TOKEN_RE.match(text, index)
        if match is None or match.end() == index:
            raise FormulaSyntaxError(f"unexpected character {text[index]!r}", index)
        kind = match.lastgroup
        tokens.append(Token(kind, match.group(kind), match.start(kind)))
        index = match.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class FormulaParser:
    """Recursive-descent parser for the formula grammar.

    Precedence, from loosest to tightest: `<->` (left), `->` (right), `|`, `&`,
    then the unary operators.
    """

    def __init__(self, text: str, agent_count: int, allow_reserved: bool = False):
        self.__tokens = tokenize(text)
        self.__index = 0
        self.__agent_count = agent_count
        self.__allow_reserved = allow_reserved

    def parse(self) -> Formula:
        phi = self.__equivalence()
        token = self.__peek()
        if token.kind != "end":
            raise FormulaSyntaxError(f"unexpected {token.text!r}", token.position)
        return phi

    def __peek(self, offset: int = 0) -> Token:
        return self.__tokens[min(self.__index + offset, len(self.__tokens) - 1)]

    def __advance(self) -> Token:
        token = self.__peek()
        self.__index += 1
        return token

    def __accept(self, text: str) -> bool:
        if self.__peek().kind == "sym" and self.__peek().text == text:
            self.__index += 1
            return True
        return False

    def __expect(self, text: str):
        token = self.__peek()
        if not self.__accept(text):
            shown = token.text or "end of input"
            raise FormulaSyntaxError(
                f"expected {text!r} but found {shown!r}", token.position
            )

    def __equivalence(self) -> Formula:
        phi = self.__implication()
        while self.__accept("<->"):
            phi = iff(phi, self.__implication())
        return phi

    def __implication(self) -> Formula:
        phi = self.__disjunction()
        if self.__accept("->"):
            return implies(phi, self.__implication())
        return phi

    def __disjunction(self) -> Formula:
        phi = self.__conjunction()
        while self.__accept("|"):
            phi = Or(phi, self.__conjunction())
        return phi

    def __conjunction(self) -> Formula:
        phi = self.__unary()
        while self.__accept("&"):
            phi = And(phi, self.__unary())
        return phi

    def __agent(self) -> int:
        token = self.__advance()
        if token.kind != "nat":
            raise FormulaSyntaxError("expected an agent index", token.position)
        index = int(token.text)
        if index >= self.__agent_count:
            raise AgentOutOfRange(index, self.__agent_count)
        return index

    def __variable(self) -> str:
        token = self.__advance()
        if token.kind != "ident" or token.text in KEYWORDS:
            raise FormulaSyntaxError("expected a propositional variable", token.position)
        if token.text.startswith("_") and not (
            self.__allow_reserved and token.text == RESERVED_VARIABLE
        ):
            raise FormulaSyntaxError(
                f"identifier {token.text!r} is reserved", token.position
            )
        return token.text

    def __unary(self) -> Formula:
        token = self.__peek()
        if token.kind == "end":
            raise FormulaSyntaxError("unexpected end of input", token.position)
        if token.kind == "sym":
            return self.__symbol_unary(token)
        if token.kind == "ident":
            return self.__word_unary(token)
        raise FormulaSyntaxError(f"unexpected {token.text!r}", token.position)

    def __symbol_unary(self, token: Token) -> Formula:
        self.__advance()
        match token.text:
            case "!":
                return negate(self.__unary())
            case "~":
                return NegAtom(self.__variable())
            case "(":
                phi = self.__equivalence()
                self.__expect(")")
                return phi
            case "[":
                if self.__accept("]"):
                    return Box(self.__unary())
                agent = self.__agent()
                self.__expect("]")
                return AgBox(agent, self.__unary())
            case "<":
                if self.__accept(">"):
                    return Dia(self.__unary())
                agent = self.__agent()
                self.__expect(">")
                return AgDia(agent, self.__unary())
        raise FormulaSyntaxError(f"unexpected {token.text!r}", token.position)

    def __word_unary(self, token: Token) -> Formula:
        following = self.__peek(1)
        if token.text in ("O", "P") and following.kind == "sym" and following.text == "[":
            self.__advance()
            self.__advance()
            agent = self.__agent()
            self.__expect("]")
            body = self.__unary()
            return Ought(agent, body) if token.text == "O" else Perm(agent, body)
        match token.text:
            case "box":
                self.__advance()
                return Box(self.__unary())
            case "dia":
                self.__advance()
                return Dia(self.__unary())
            case "true":
                self.__advance()
                return TOP
            case "false":
                self.__advance()
                return BOTTOM
        return Atom(self.__variable())


def parse(text: str, agent_count: int, allow_reserved: bool = False) -> Formula:
    """Parse a formula text into its negation normal form.

    Args:
        text (str): The formula text.
        agent_count (int): Number of agents; agent indices must be smaller.
        allow_reserved (bool): Admit the reserved variable `_t`, as found in
            certificates.

    Returns:
        Formula: The parsed formula.

    Raises:
        FormulaSyntaxError: If the text does not conform to the grammar.
        AgentOutOfRange: If an agent index is not smaller than `agent_count`.
    """
    return FormulaParser(text, agent_count, allow_reserved).parse()
