"""Exception classes for facloc operations."""


class FacLocError(Exception):
    """Base exception for all facloc errors."""

    pass


class MalformedInstanceError(FacLocError):
    """Instance, preference or placement is inconsistent.

    Raised when:
    - A preference references a facility index outside the placement
    - A placement length differs from the instance's facility count
    - An operation for k facilities receives an instance with another k
    - A builder receives an empty agent list

    Nothing was computed; fix the input and retry.
    """

    pass


class InstanceParseError(MalformedInstanceError):
    """Instance text could not be parsed.

    Raised when:
    - Header is missing or not ``n k``
    - Agent count differs from the header
    - A line does not have exactly three fields
    - Location is not a decimal or ``p/q`` fraction
    - Weight is zero, negative or not an integer
    - Preference is empty or names an unknown facility

    The message starts with the 1-based line number when one applies.
    """

    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class EmptySetError(FacLocError):
    """Weighted median requested for an empty point set.

    Callers decide the policy (see ``optimal_heterogeneous``).
    """

    pass


class ConfigError(FacLocError):
    """Generator or builder parameters are invalid.

    Raised when:
    - GeneratorConfig ranges are empty or probabilities do not sum to 1
    - lower_bound_family weight guard W >= 1000 * N is violated
    - k3_counterexample constraint 2*l2 < l1 < 3*l2 is violated
    - Sweep count is smaller than 1
    """

    pass


class EnumerationLimitError(FacLocError):
    """k^k assignment enumeration is too large to attempt."""

    pass


class BoundViolationError(FacLocError):
    """A proven property failed on a concrete instance.

    Raised when:
    - COST > 11/4 * OPT (or > 3 * OPT)
    - COST > 0 while OPT = 0
    - The two-facility mechanism is manipulable on a swept instance

    Any of these means a bug; the message names the offending instance.
    """

    pass


class UsageError(FacLocError):
    """Command line could not be parsed.

    Raised when:
    - A subcommand or flag is unknown
    - A flag value has the wrong type
    """

    pass
