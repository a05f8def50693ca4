"""Exception types shared across the package.

The CLI maps these onto exit codes: config/schema problems -> 2,
numeric error budgets -> 3, regime mismatches -> 4.
"""


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class DivergenceError(ValueError):
    """A requested integral or series diverges for the given family."""


class RegimeError(ValueError):
    """Operation invoked on a law outside its applicable regime."""


class ConstructionError(ValueError):
    """A step law cannot be built from the given parameters."""


class BudgetExceededError(RuntimeError):
    """Certified numerical error exceeds the caller's budget."""


class ConfigError(ValueError):
    """Experiment configuration failed schema validation."""
