"""Approximate web-page and GOP-video transmission over the coded channel."""

from .mapping import (
    IFRAME,
    PAD,
    PFRAME,
    PIXEL_BIT,
    TEXT,
    PriorityMapping,
    build_video_mapping,
    build_webpage_mapping,
)
from .payload import GopPayload, WebPagePayload, make_webpage
from .pgm import load_pgm, read_pgm, save_pgm, write_pgm
from .quality import gop_quality, ms_ssim
from .timing import (
    LINK_DELAY_S,
    ThroughputParams,
    performance,
    performance_gain,
    throughput,
    transfer_time,
)
from .transfer import TransferStats, simulate_transfer
