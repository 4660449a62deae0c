"""Canonical FCL pretty-printer; its output parses back to an identical AST."""
from __future__ import annotations

from .model import FclProgram, Pairs, Rule

INDENT = "    "


def _num(x: float) -> str:
    return repr(float(x))


def format_rule(rule: Rule) -> str:
    conds = " AND ".join(f"{c.var} IS {c.term}" for c in rule.antecedents)
    cons = rule.consequent
    return f"RULE {rule.id} : IF {conds} THEN {cons.var} IS {cons.term};"


def pretty_print(p: FclProgram) -> str:
    out = [f"FUNCTION_BLOCK {p.block_name}", ""]
    for keyword, variables in (("VAR_INPUT", p.inputs), ("VAR_OUTPUT", p.outputs)):
        out.append(keyword)
        out.extend(f"{INDENT}{v.name} : {v.kind};" for v in variables)
        out += ["END_VAR", ""]
    for var, terms in p.fuzzify_blocks.items():
        out.append(f"FUZZIFY {var}")
        if isinstance(terms, Pairs):
            items = " ".join(f"({label}, {_num(apex)})" for label, apex in terms.pairs)
            out.append(f"{INDENT}TERM {terms.name} := pairs {items};")
        else:
            out.extend(f"{INDENT}TERM {t.label} := trian {_num(t.a)} {_num(t.b)} {_num(t.c)};"
                       for t in terms.terms)
        out += ["END_FUZZIFY", ""]
    for var, block in p.defuzzify_blocks.items():
        out.append(f"DEFUZZIFY {var}")
        out.extend(f"{INDENT}TERM {t.label} := trian {_num(t.a)} {_num(t.b)} {_num(t.c)};"
                   for t in block.terms.terms)
        out.append(f"{INDENT}METHOD : {block.method};")
        out += ["END_DEFUZZIFY", ""]
    out.append(f"RULEBLOCK {p.ruleblock_name}")
    out.extend(INDENT + format_rule(r) for r in p.rules)
    out += ["END_RULEBLOCK", "", "END_FUNCTION_BLOCK", ""]
    return "\n".join(out)
