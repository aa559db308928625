"""
The MIT License (MIT)

Copyright (c) 2026 PyTxAlloc contributors

See the LICENSE file distributed with this package for the full text.
"""


class PTABaseException(Exception):

    err_type = "ERROR"
    exit_code = 1

    def __init__(self, message=""):
        self.message = message
        super(PTABaseException, self).__init__(message)

    def __str__(self):
        return "[%s]: %s" % (self.err_type, self.message)

    def as_record(self):
        """
        Machine readable form printed by the CLI on failure
        """
        return {"error": self.message, "type": self.err_type, "exit_code": self.exit_code}


class PTAInputError(PTABaseException):
    """
    Anything wrong with what the user handed us
    """
    err_type = "INPUT ERROR"
    exit_code = 2


class PTAInvalidArgument(PTAInputError):
    """
    Invalid argument passed to PyTxAlloc
    """
    err_type = "INVALID ARGUMENT"


class PTAMissingArgument(PTAInvalidArgument):
    """
    Required argument missing from a configuration
    """
    err_type = "MISSING ARGUMENT"


class PTAInvalidType(PTAInvalidArgument):
    """
    Invalid argument due to object type
    """
    err_type = "INVALID TYPE"

    def __init__(self, obj, expected):
        super(PTAInvalidType, self).__init__(
            "Invalid object type ({0}) expecting ({1})".format(type(obj).__name__, expected.__name__))


class PTACaseNotFound(PTAInputError):
    """
    Case or scenario file does not exist
    """
    err_type = "CASE NOT FOUND"

    def __init__(self, path):
        self.path = path
        super(PTACaseNotFound, self).__init__("case not found: {0}".format(path))


class PTAValidationError(PTAInputError):
    """
    Input data violates a structural invariant, every violation is kept
    """
    err_type = "VALIDATION ERROR"

    def __init__(self, violations):
        if isinstance(violations, str):
            violations = [violations]
        self.violations = list(violations)
        super(PTAValidationError, self).__init__("; ".join(self.violations))


class PTADomainError(PTABaseException):
    """
    Computation is well posed but has no meaningful answer
    """
    err_type = "DOMAIN ERROR"
    exit_code = 3


class PTANoBeneficiaries(PTADomainError):
    """
    Every participant has non-positive benefit
    """
    err_type = "NO BENEFICIARIES"

    def __init__(self, message="no beneficiaries"):
        super(PTANoBeneficiaries, self).__init__(message)


class PTACounterfactualError(PTADomainError):
    """
    Investment subset inconsistent with the reference plan
    """
    err_type = "COUNTERFACTUAL ERROR"


class PTAInconsistencyError(PTADomainError):
    """
    Primal/dual numbers contradict each other beyond tolerance
    """
    err_type = "INCONSISTENCY"


class PTASolverError(PTABaseException):
    """
    Solver failed to deliver a usable answer
    """
    err_type = "SOLVER ERROR"
    exit_code = 4


class PTAInfeasibleModel(PTASolverError):
    """
    Penalised model reported infeasible, always an internal error
    """
    err_type = "INFEASIBLE MODEL"


class PTASolverTimeLimit(PTASolverError):
    """
    Time limit reached without a feasible incumbent
    """
    err_type = "TIME LIMIT"


class PTAEnvironmentError(PTABaseException):
    """
    Environment error e.g. missing dependencies
    """
    err_type = "ENVIRONMENT ERROR"
    exit_code = 4


class PTAMissingDependency(PTAEnvironmentError):
    """
    Missing dependency
    """
    err_type = "MISSING DEPENDENCY"
