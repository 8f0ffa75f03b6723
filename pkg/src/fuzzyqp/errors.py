class FuzzyQpError(Exception):
    """Base class for solver errors."""


class InstanceFormatError(FuzzyQpError):
    """Instance text could not be parsed into an instance."""


class InvalidInstanceError(FuzzyQpError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class UnboundedError(FuzzyQpError):
    pass


class TooLargeError(FuzzyQpError):
    pass


class InfeasibleError(FuzzyQpError):
    pass


class LevelSetEmptyError(FuzzyQpError):
    pass
