"""Exception hierarchy.

Everything the library raises on bad input derives from :class:`OcrError`,
which the command line maps to exit code 1.
"""


class OcrError(Exception):
    pass


class CodecError(OcrError):
    """A coded bitstream could not be decoded.

    ``row`` is the image row being decoded when the error was detected, or
    ``None`` when the failure happened outside of a page context.
    """

    def __init__(self, message: str, row: int | None = None, bit: int | None = None):
        self.row = row
        self.bit = bit
        where = []
        if row is not None:
            where.append(f"row {row}")
        if bit is not None:
            where.append(f"bit {bit}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)


class InvalidCode(CodecError):
    pass


class TruncatedStream(InvalidCode):
    pass


class Overrun(CodecError):
    pass


class SumMismatch(OcrError, ValueError):
    pass


class TiffError(OcrError):
    pass


class BadMagic(TiffError):
    pass


class TruncatedIfd(TiffError):
    pass


class UnsupportedCompression(TiffError):
    pass


class PageOutOfRange(TiffError, IndexError):
    pass


class No2DModes(OcrError):
    pass


class FormatError(OcrError, ValueError):
    """A text dump (grid, segmentation, model, font, page spec) is malformed."""


class MissingSymbol(OcrError):
    pass


class EmptyCorpus(OcrError):
    pass


class DimensionMismatch(OcrError, ValueError):
    pass


class UnknownGlyph(OcrError, KeyError):
    pass
