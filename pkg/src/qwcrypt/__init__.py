"""Wavelet low-band image encryption with a logistic-map keystream.

The forward D4 transform keeps only the LL quadrant, which is quantized to
bytes and XOR-ed with a chaotic keystream. Decryption zero-fills the detail
bands and inverts the transform. :mod:`qwcrypt.qcircuit` simulates the
corresponding GQIR circuits on small images.
"""

from .cipher import CipherPackage, QuantParams, decrypt, encrypt
from .dwt import SubbandSet, forward_d4_2d, inverse_d4_2d
from .image_io import GrayImage, read_pgm, write_pgm
from .keystream import KeyParams, generate

__all__ = [
    "CipherPackage",
    "GrayImage",
    "KeyParams",
    "QuantParams",
    "SubbandSet",
    "decrypt",
    "encrypt",
    "forward_d4_2d",
    "generate",
    "inverse_d4_2d",
    "read_pgm",
    "write_pgm",
]

__version__ = "0.1.0"
