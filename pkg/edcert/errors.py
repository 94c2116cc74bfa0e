class EdCertError(Exception):
    """Base error; `exit_code` is what the CLI exits with."""
    exit_code = 1


class InvalidInput(EdCertError, ValueError):
    exit_code = 2


class MalformedSpec(InvalidInput):
    pass


class UnsaturatedSubvariety(InvalidInput):
    pass


class OddRankSubvariety(InvalidInput):
    pass


class InvalidFactor(InvalidInput):
    pass


class NotPrime(InvalidInput):
    pass


class ZeroValuation(InvalidInput):
    pass


class InvalidMultiplier(InvalidInput):
    pass


class SingularMatrix(InvalidInput):
    pass


class NotASublattice(InvalidInput):
    pass


class InfiniteQuotient(InvalidInput):
    pass


class ForeignSubvariety(InvalidInput):
    pass


class IncompatibleComposition(InvalidInput):
    pass


class ZeroChi(InvalidInput):
    """chi(X, O_X) = 0: the fixed-point method gives no bound."""


class ChiOutOfRange(InvalidInput):
    pass


class DegreeTooSmall(InvalidInput):
    pass


class InvalidDimension(InvalidInput):
    pass


class InvalidArgument(InvalidInput):
    pass


class CertificationRefused(EdCertError):
    exit_code = 3


class Uncertified(CertificationRefused):
    """A min over a partial subvariety family only certifies the upper direction."""


class CoprimalityFails(CertificationRefused):
    pass


class SoundnessError(EdCertError, AssertionError):
    exit_code = 4
