"""Verification of membership in Ouroboros spaces (idempotent functions).

Modules:
- domain: Scalar domains, signatures and their mini-syntax.
- expr: Function DSL (parser, printer, evaluator) and FunctionDef.
- catalog: Ready-made functions, mean_n among them.
- checker: Exhaustive/sampled membership checks and verdicts.
- analysis: Image and fixed-point sets, Fix(f) = Im(f).
- slln: Seeded running-mean simulation and mean_n sweeps.
- report: JSON/text/CSV records.
- config: YAML/JSON settings loader.

Sampling is deterministic: every random draw goes through
numpy.random.Generator seeded from the configured seed.
"""

__all__ = [
    "domain",
    "expr",
    "catalog",
    "checker",
    "analysis",
    "slln",
    "report",
    "config",
]
