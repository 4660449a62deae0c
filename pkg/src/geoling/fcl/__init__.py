"""FCL (IEC 61131-7) subset: parser, pretty-printer and inference engine."""
from .engine import (
    DEFAULT_COG_SAMPLES,
    CompiledController,
    InferenceError,
    InferenceResult,
    Mode,
    compile_program,
    infer,
)
from .model import Condition, Defuzzify, FclProgram, Pairs, Rule, Triangle, Triangles, Variable
from .parser import FclError, ParseError, SemanticError, parse_fcl
from .printer import format_rule, pretty_print

__all__ = [
    "DEFAULT_COG_SAMPLES",
    "CompiledController",
    "Condition",
    "Defuzzify",
    "FclError",
    "FclProgram",
    "InferenceError",
    "InferenceResult",
    "Mode",
    "Pairs",
    "ParseError",
    "Rule",
    "SemanticError",
    "Triangle",
    "Triangles",
    "Variable",
    "compile_program",
    "format_rule",
    "infer",
    "parse_fcl",
    "pretty_print",
]
