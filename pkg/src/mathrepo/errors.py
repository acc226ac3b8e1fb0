class MathRepoError(Exception):
    """Base class for all toolkit errors."""
