"""Bit-exact CCITT Group 3 (MH, MR) and Group 4 (MMR) coding."""

from .bitio import BitReader, BitWriter
from .page import (
    G3_1D,
    G3_2D,
    G4,
    LSB_FIRST,
    MSB_FIRST,
    SCHEMES,
    CompressedPage,
    decode_page,
    encode_page,
)
from .runlength import (
    changing_elements,
    mh_decode_line,
    mh_encode_line,
    runlength_decode_line,
    runlength_encode_line,
)
from .twod import (
    MODE_KINDS,
    CodingMode,
    CodingState,
    Horizontal,
    ModeEvent,
    Pass,
    Vertical,
    classify_mode,
    coding_states,
    g2d_decode_line,
    g2d_encode_line,
)

__all__ = [
    "BitReader", "BitWriter", "G3_1D", "G3_2D", "G4", "LSB_FIRST", "MSB_FIRST", "SCHEMES",
    "CompressedPage", "decode_page", "encode_page", "changing_elements", "mh_decode_line",
    "mh_encode_line", "runlength_decode_line", "runlength_encode_line", "MODE_KINDS",
    "CodingMode", "CodingState", "Horizontal", "ModeEvent", "Pass", "Vertical",
    "classify_mode", "coding_states", "g2d_decode_line", "g2d_encode_line",
]
