"""Single-bitmap block truncation coding of color images.

A lossy codec that stores one binary bitmap per block, shared by the R, G
and B channels, plus six per-channel quantization values.  The bitmap comes
from thresholding the per-pixel channel average and is then refined by
per-bit hill climbing; encoding runs data-parallel over blocks.
"""

from .bitstream import (EncodedImage, FormatError, MODE_GRAY, MODE_PROPOSED, MODE_WPLANE,
                        deserialize, record_size, serialize, stream_size)
from .blocks import Block, BlockGrid, RgbImage, assemble, partition, reassemble
from .btc_gray import GrayBlockCode, decode_gray_block, encode_gray_block
from .codec import (SCHEME_GRAY, SCHEME_PROPOSED, SCHEME_WPLANE, SCHEMES,
                    decode_image, encode_block_gray, encode_block_proposed,
                    encode_block_wplane, encode_image)
from .metrics import (QualityReport, color_mse, per_channel_mse, quality_report, ssim)
from .parallel import BlockEncodeError, ExecPlan, encode_parallel, plan
from .reconstruct import final_quantize, reconstruct_block
from .refine import RefineResult, block_cost, flip_delta, refine_bitmap
from .wplane import QuantPair, initial_bitmap, quantize_channels, weighted_plane

__version__ = "1.0.0"

__all__ = [
    "Block", "BlockGrid", "BlockEncodeError", "EncodedImage", "ExecPlan", "FormatError",
    "GrayBlockCode", "MODE_GRAY", "MODE_PROPOSED", "MODE_WPLANE", "QualityReport",
    "QuantPair", "RefineResult", "RgbImage", "SCHEMES", "SCHEME_GRAY", "SCHEME_PROPOSED",
    "SCHEME_WPLANE", "assemble", "block_cost", "color_mse", "decode_gray_block",
    "decode_image", "deserialize", "encode_block_gray", "encode_block_proposed",
    "encode_block_wplane", "encode_gray_block", "encode_image", "encode_parallel",
    "final_quantize", "flip_delta", "initial_bitmap", "partition", "per_channel_mse",
    "plan", "quality_report", "quantize_channels", "reassemble", "reconstruct_block",
    "record_size", "refine_bitmap", "serialize", "ssim", "stream_size", "weighted_plane",
]
