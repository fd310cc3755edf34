"""Exception hierarchy. Every failure the pipeline can report maps to one class."""


class QCMomentError(ValueError):
    """Base class for all solver errors."""


class MissingMomentError(QCMomentError):
    pass


class InsufficientDegreeError(QCMomentError):
    pass


class InconsistentRelationsError(QCMomentError):
    pass


class IncompleteRelationsError(QCMomentError):
    pass


class NoStabilizationError(QCMomentError):
    pass


class BlockMismatchError(QCMomentError):
    pass


class SingularBasisError(QCMomentError):
    pass


class NotSimultaneouslyDiagonalizableError(QCMomentError):
    pass


class ConjugateSymmetryError(QCMomentError):
    pass


class IllConditionedError(QCMomentError):
    pass


class WeightMismatchError(QCMomentError):
    pass


class ClassificationMismatchError(QCMomentError):
    pass
