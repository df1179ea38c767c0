"""LZ77 parsing in compact space, rightmost sources and range predecessor queries."""

from .elias_fano import CharPredecessorSet, EliasFanoSeq, cps_build_bitparallel, cps_build_simple
from .errors import ConfigError
from .lz import Factor, LZParser, decode, lz_parse
from .oracle import oracle_lz, oracle_range_pred, oracle_rightmost
from .range_pred import PointSet, RangePredIndex, rp_build, rp_query, rp_report_sorted
from .rightmost import RightmostConfig, RightmostParser, rightmost_parse
from .rmq import RmqIndex, SampledRmq
from .succinct import BitVector, PackedArray
from .text_index import Text, TextIndex
from .wavelet import WaveletTree

__all__ = [
    "BitVector", "CharPredecessorSet", "ConfigError", "EliasFanoSeq", "Factor", "LZParser",
    "PackedArray", "PointSet", "RangePredIndex", "RightmostConfig", "RightmostParser",
    "RmqIndex", "SampledRmq", "Text", "TextIndex", "WaveletTree", "cps_build_bitparallel",
    "cps_build_simple", "decode", "lz_parse", "oracle_lz", "oracle_range_pred",
    "oracle_rightmost", "rightmost_parse", "rp_build", "rp_query", "rp_report_sorted",
]
