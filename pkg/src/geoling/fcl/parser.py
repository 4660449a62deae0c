"""Lexer and recursive-descent parser for the FCL subset.

Supported structure::

    FUNCTION_BLOCK name
    VAR_INPUT  name : LING|REAL; ...  END_VAR
    VAR_OUTPUT name : LING|REAL; ...  END_VAR
    FUZZIFY var
        TERM S := pairs (label, apex) (label, apex) ...;
      | TERM label := trian a b c; ...
    END_FUZZIFY
    DEFUZZIFY var  TERM label := trian a b c; ...  METHOD : COG;  END_DEFUZZIFY
    RULEBLOCK name
        RULE n : IF var IS term AND ... THEN var IS term;
    END_RULEBLOCK
    END_FUNCTION_BLOCK

Keywords are case-sensitive.  ``//`` starts a comment running to end of line.
Recognised IEC 61131-7 features outside this subset raise ``ParseError``
instead of being skipped.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .model import (
    Condition,
    Defuzzify,
    FclProgram,
    Pairs,
    Rule,
    Triangle,
    Triangles,
    Variable,
)

__all__ = ["FclError", "ParseError", "SemanticError", "parse_fcl", "tokenize"]


class FclError(Exception):
    pass


class ParseError(FclError):
    def __init__(self, message: str, line: int, column: int, expected: str | None = None):
        self.message = message
        self.line = line
        self.column = column
        self.expected = expected
        super().__init__(f"line {line}, column {column}: {message}")


class SemanticError(FclError):
    def __init__(self, message: str, rule_id: int | None = None):
        self.rule_id = rule_id
        prefix = f"rule {rule_id}: " if rule_id is not None else ""
        super().__init__(prefix + message)


KEYWORDS = frozenset({
    "FUNCTION_BLOCK", "END_FUNCTION_BLOCK", "VAR_INPUT", "VAR_OUTPUT", "END_VAR",
    "FUZZIFY", "END_FUZZIFY", "DEFUZZIFY", "END_DEFUZZIFY", "TERM", "pairs",
    "trian", "METHOD", "COG", "RULEBLOCK", "END_RULEBLOCK", "RULE", "IF", "IS",
    "AND", "THEN", "LING", "REAL",
})

UNSUPPORTED = frozenset({
    "OR", "NOT", "WITH", "ACCU", "ACT", "DEFAULT", "RANGE", "VAR", "OPTION",
    "END_OPTION", "trape", "gauss", "gbell", "sigm", "singleton", "COGS",
    "COA", "MOM",
})

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r\f\v]+)
  | (?P<newline>\n)
  | (?P<comment>//[^\n]*)
  | (?P<number>[-+]?(?:\d+\.\d*|\.\d+|\d+)(?:[eE][-+]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<symbol>:=|[:;(),])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str  # ident, keyword, number, symbol, eof
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        col = pos - line_start + 1
        if kind == "newline":
            line += 1
            line_start = m.end()
        elif kind == "ident":
            word = m.group()
            if word in UNSUPPORTED:
                raise ParseError(f"unsupported FCL feature {word!r}", line, col)
            tokens.append(Token("keyword" if word in KEYWORDS else "ident", word, line, col))
        elif kind in ("number", "symbol"):
            tokens.append(Token(kind, m.group(), line, col))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


def _describe(tok: Token) -> str:
    return "end of input" if tok.kind == "eof" else repr(tok.text)


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, expected: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(f"expected {expected}, found {_describe(tok)}",
                          tok.line, tok.column, expected)

    def at(self, text: str) -> bool:
        return self.tok.kind in ("keyword", "symbol") and self.tok.text == text

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise self.error(repr(text))
        tok = self.tok
        self.i += 1
        return tok

    def ident(self, what: str = "identifier") -> str:
        if self.tok.kind != "ident":
            raise self.error(what)
        tok = self.tok
        self.i += 1
        return tok.text

    def number(self) -> float:
        if self.tok.kind != "number":
            raise self.error("number")
        tok = self.tok
        self.i += 1
        return float(tok.text)

    def integer(self) -> int:
        tok = self.tok
        if tok.kind != "number" or not tok.text.isdigit():
            raise self.error("rule number")
        self.i += 1
        return int(tok.text)

    # grammar

    def program(self) -> FclProgram:
        self.expect("FUNCTION_BLOCK")
        block_name = self.ident("function block name")
        inputs, outputs, fuzzify, defuzzify = [], [], {}, {}
        ruleblock = None
        while not self.at("END_FUNCTION_BLOCK"):
            tok = self.tok
            if self.at("VAR_INPUT"):
                inputs.extend(self.var_section("VAR_INPUT"))
            elif self.at("VAR_OUTPUT"):
                outputs.extend(self.var_section("VAR_OUTPUT"))
            elif self.at("FUZZIFY"):
                var, terms = self.fuzzify()
                if var in fuzzify:
                    raise ParseError(f"duplicate FUZZIFY block for {var!r}", tok.line, tok.column)
                fuzzify[var] = terms
            elif self.at("DEFUZZIFY"):
                var, block = self.defuzzify()
                if var in defuzzify:
                    raise ParseError(f"duplicate DEFUZZIFY block for {var!r}", tok.line, tok.column)
                defuzzify[var] = block
            elif self.at("RULEBLOCK"):
                if ruleblock is not None:
                    raise ParseError("only one RULEBLOCK is supported", tok.line, tok.column)
                ruleblock = self.ruleblock()
            else:
                raise self.error("VAR_INPUT, VAR_OUTPUT, FUZZIFY, DEFUZZIFY, RULEBLOCK "
                                 "or END_FUNCTION_BLOCK")
        self.expect("END_FUNCTION_BLOCK")
        if self.tok.kind != "eof":
            raise self.error("end of input")
        if ruleblock is None:
            raise SemanticError("at least one rule required (no RULEBLOCK)")
        ruleblock_name, rules = ruleblock
        if not rules:
            raise SemanticError("at least one rule required")
        program = FclProgram(block_name, tuple(inputs), tuple(outputs), fuzzify,
                             defuzzify, tuple(rules), ruleblock_name)
        _check_semantics(program)
        return program

    def var_section(self, keyword: str) -> list[Variable]:
        self.expect(keyword)
        variables = []
        while not self.at("END_VAR"):
            name = self.ident("variable name")
            self.expect(":")
            if not (self.at("LING") or self.at("REAL")):
                raise self.error("variable type LING or REAL")
            kind = self.tok.text
            self.i += 1
            self.expect(";")
            variables.append(Variable(name, kind))
        self.expect("END_VAR")
        return variables

    def fuzzify(self):
        self.expect("FUZZIFY")
        var = self.ident("variable name")
        start = self.tok
        pairs, triangles = None, []
        while self.at("TERM"):
            tok = self.tok
            name, shape = self.term()
            if isinstance(shape, Pairs):
                if pairs is not None or triangles:
                    raise ParseError("a pairs term set must be the only TERM of its block",
                                     tok.line, tok.column)
                pairs = shape
            else:
                if pairs is not None:
                    raise ParseError("a pairs term set must be the only TERM of its block",
                                     tok.line, tok.column)
                triangles.append(shape)
        if pairs is None and not triangles:
            raise self.error("TERM", start)
        self.expect("END_FUZZIFY")
        return var, pairs if pairs is not None else Triangles(tuple(triangles))

    def defuzzify(self):
        self.expect("DEFUZZIFY")
        var = self.ident("variable name")
        triangles, method = [], None
        while not self.at("END_DEFUZZIFY"):
            if self.at("TERM"):
                tok = self.tok
                _, shape = self.term()
                if isinstance(shape, Pairs):
                    raise ParseError("pairs term sets are not allowed in DEFUZZIFY",
                                     tok.line, tok.column)
                triangles.append(shape)
            elif self.at("METHOD"):
                if method is not None:
                    raise self.error("a single METHOD")
                self.i += 1
                self.expect(":")
                method = self.expect("COG").text
                self.expect(";")
            else:
                raise self.error("TERM, METHOD or END_DEFUZZIFY")
        if not triangles:
            raise self.error("TERM")
        if method is None:
            raise self.error("METHOD")
        self.expect("END_DEFUZZIFY")
        return var, Defuzzify(Triangles(tuple(triangles)), method)

    def term(self):
        self.expect("TERM")
        name = self.ident("term name")
        self.expect(":=")
        if self.at("pairs"):
            self.i += 1
            items = []
            while self.at("("):
                self.i += 1
                label = self.ident("term label")
                self.expect(",")
                apex_tok = self.tok
                apex = self.number()
                self.expect(")")
                if items and not apex > items[-1][1]:
                    raise ParseError(
                        f"apexes must increase: {items[-1][0]}={items[-1][1]!r} "
                        f"then {label}={apex!r}", apex_tok.line, apex_tok.column)
                if any(label == l for l, _ in items):
                    raise ParseError(f"duplicate label {label!r}", apex_tok.line, apex_tok.column)
                items.append((label, apex))
            if len(items) < 2:
                raise self.error("'(' (a pairs term set needs at least 2 pairs)")
            self.expect(";")
            return name, Pairs(name, tuple(items))
        if self.at("trian"):
            tok = self.tok
            self.i += 1
            a, b, c = self.number(), self.number(), self.number()
            self.expect(";")
            if not a <= b <= c or a == c:
                raise ParseError(f"triangle {name!r} needs a <= b <= c with a < c",
                                 tok.line, tok.column)
            return name, Triangle(name, a, b, c)
        raise self.error("'pairs' or 'trian'")

    def ruleblock(self):
        self.expect("RULEBLOCK")
        name = self.ident("rule block name")
        rules = []
        while self.at("RULE"):
            rules.append(self.rule())
        self.expect("END_RULEBLOCK")
        return name, rules

    def rule(self) -> Rule:
        self.expect("RULE")
        rule_id = self.integer()
        self.expect(":")
        self.expect("IF")
        antecedents = [self.condition()]
        while self.at("AND"):
            self.i += 1
            antecedents.append(self.condition())
        self.expect("THEN")
        consequent = self.condition()
        self.expect(";")
        return Rule(rule_id, tuple(antecedents), consequent)

    def condition(self) -> Condition:
        var = self.ident("variable name")
        self.expect("IS")
        return Condition(var, self.ident("term label"))


def _check_semantics(p: FclProgram) -> None:
    inputs = {v.name for v in p.inputs}
    outputs = {v.name for v in p.outputs}
    if not p.outputs:
        raise SemanticError("at least one output variable required")
    both = inputs & outputs
    if both:
        raise SemanticError(f"variables declared as both input and output: {sorted(both)}")
    for var in p.fuzzify_blocks:
        if var not in inputs:
            raise SemanticError(f"FUZZIFY block for undeclared input {var!r}")
    for var in p.defuzzify_blocks:
        if var not in outputs:
            raise SemanticError(f"DEFUZZIFY block for undeclared output {var!r}")
    for var in inputs - p.fuzzify_blocks.keys():
        raise SemanticError(f"input {var!r} has no FUZZIFY block")
    for var in outputs - p.defuzzify_blocks.keys():
        raise SemanticError(f"output {var!r} has no DEFUZZIFY block")
    seen = set()
    for rule in p.rules:
        if rule.id in seen:
            raise SemanticError("duplicate rule number", rule.id)
        seen.add(rule.id)
        used = set()
        for cond in rule.antecedents:
            if cond.var not in inputs:
                raise SemanticError(f"undeclared input variable {cond.var!r}", rule.id)
            if cond.var in used:
                raise SemanticError(f"variable {cond.var!r} appears twice", rule.id)
            used.add(cond.var)
            if cond.term not in p.term_labels(cond.var):
                raise SemanticError(f"unknown term {cond.term!r} for {cond.var!r}", rule.id)
        cons = rule.consequent
        if cons.var not in outputs:
            raise SemanticError(f"undeclared output variable {cons.var!r}", rule.id)
        if cons.term not in p.term_labels(cons.var):
            raise SemanticError(f"unknown term {cons.term!r} for {cons.var!r}", rule.id)


def parse_fcl(text: str) -> FclProgram:
    """Parse FCL source into an :class:`FclProgram`.

    Raises:
        ParseError: on a syntax error, with ``line``, ``column`` and ``expected``.
        SemanticError: on undeclared variables, unknown terms or an empty rule
            base; rule-level problems carry ``rule_id``.
    """
    return _Parser(text).program()
