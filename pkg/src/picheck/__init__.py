"""A small proof-checking kernel: lambda-Pi with an impredicative Prop, a
cumulative Type hierarchy with inferred levels, and parameterized inductive
types, driven by plain-text ``.pv`` files."""
from .driver import CheckReport, FileReport, Session, check_files, check_text, process
from .parser import ParseError, parse

__all__ = [
    "CheckReport", "FileReport", "ParseError", "Session", "check_files", "check_text",
    "parse", "process",
]
