from picheck.elaborate import elaborate
from picheck.parser import parse_term
from picheck.pretty import format_term


def term(env, text: str):
    return elaborate(env, parse_term(text))


def show(env, t) -> str:
    return format_term(t, env)


def statuses(report) -> list:
    """Per-command outcome without spans or messages; Require entries dropped."""
    return [(c.name, c.kind, c.status, c.error["kind"] if c.error else None)
            for c in report.commands if c.kind != "Require"]
