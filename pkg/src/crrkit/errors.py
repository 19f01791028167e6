"""Exception types shared across the toolkit."""


class CrrError(Exception):
    """Base class for toolkit errors."""


class BaseMismatchError(CrrError):
    """Two residue vectors do not share a moduli base."""


class PrimeLimitError(CrrError):
    """Prime index beyond the configured generation ceiling."""


class ParseError(CrrError):
    """Malformed CRR text; carries the first offending position."""

    def __init__(self, message, line, token=None):
        self.line = line
        self.token = token
        where = f"line {line}" if token is None else f"line {line}, token {token}"
        super().__init__(f"{where}: {message}")


class AttemptsExhaustedError(CrrError):
    """Random linear forms never became coprime within the attempt cap."""

    def __init__(self, attempts, n2_bound):
        self.attempts = attempts
        self.n2_bound = n2_bound
        super().__init__(
            f"no coprime linear forms after {attempts} attempts "
            f"(coefficient bound {n2_bound})"
        )


class GroupBoundError(CrrError):
    """A moduli group product failed the required magnitude floor."""

    def __init__(self, index, product, bound):
        self.index = index
        self.product = product
        self.bound = bound
        super().__init__(f"group {index} product {product} does not exceed {bound}")
