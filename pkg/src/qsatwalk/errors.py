"""Exception taxonomy shared by all qsatwalk modules."""


class QsatwalkError(Exception):
    """Base class for all errors raised by this package."""


class QubitPairInvalid(QsatwalkError):
    """Clause qubit indices are equal, negative, or out of range."""


class ZeroVector(QsatwalkError):
    """Amplitude vector too small to normalize."""


class NotUnitary(QsatwalkError):
    """A matrix expected to be unitary is not, within tolerance."""


class NotHermitian(QsatwalkError):
    """A matrix expected to be Hermitian is not, within tolerance."""


class IndexOutOfRange(QsatwalkError):
    """Qubit index outside the register."""


class DimensionMismatch(QsatwalkError):
    """Operator/state dimensions do not agree or are not a power of two."""


class NonRealExpectation(QsatwalkError):
    """Expectation value of a supposedly Hermitian operator has a large imaginary part."""


class DegenerateSpectrum(QsatwalkError):
    """Spectral analysis found no nonzero eigenvalue to define a gap."""


class NumericalDrift(QsatwalkError):
    """Accumulated floating-point drift exceeded the correction budget."""


class DegenerateBranch(QsatwalkError):
    """A measurement branch with vanishing norm was selected."""


class CertificationFailed(QsatwalkError):
    """Could not certify a NO instance at the requested promise gap within the retry budget."""


class InvalidPromise(QsatwalkError):
    """Promise gap missing or outside its valid range."""


class InvalidTarget(QsatwalkError):
    """Convergence target outside (0, 1) or nonpositive gap."""


class ParseError(QsatwalkError):
    """Instance or CNF file could not be parsed; carries field/line diagnostics."""

    def __init__(self, message, field=None, line=None):
        self.field = field
        self.line = line
        where = []
        if field is not None:
            where.append(f"field {field!r}")
        if line is not None:
            where.append(f"line {line}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)
