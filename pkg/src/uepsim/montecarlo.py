"""Workload generation, the characterization gain table, and the
base-station Monte Carlo simulations.

The gain table is built by running the approximate-transmission pipeline
for each (code kind, Eb/No, text:image ratio bin, quality level) cell and
recording the mean performance gain of selective protection over the
full-protection baseline. A job's processing time on an encoder kind is
then s_j / (base_rate * (1 + gain)): encoders whose code earns a larger
gain at the job's operating point clear it proportionally faster.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import approxtx, fec, sched, uep
from .channel import ChannelConfig
from .rng import substream

# MB of payload one encoder processes per tick at gain 0. The paper-facing
# normalization is one workload-size unit per tick; 0.1 MB/tick puts the
# default gamma(2, 1.5) MB workloads into the contended regime that the
# algorithm comparison needs (see decisions ledger).
BASE_RATE_MB_PER_TICK = 0.1

EBNO_GRID = tuple(round(1.0 + 0.1 * i, 1) for i in range(11))
RATIO_BINS = tuple((20 + 40 * i, 480 - 40 * i) for i in range(8))
QUALITY_LEVELS = (0, 1)

SCENARIOS = {"4L": (4, 0), "3L2P": (3, 2), "2L2P": (2, 2)}

ALGORITHMS = ("wftm", "smab", "random", "minqueue")


@dataclass
class GainTable:
    """Mean performance gain per (kind, Eb/No, ratio bin, quality level)."""

    ebno_grid: tuple
    ratio_bins: tuple  # of (text_bits, image_bits) per codeword
    quality_levels: tuple
    gains: dict  # kind -> ndarray (n_ebno, n_ratio, n_quality)

    def __post_init__(self):
        shape = (len(self.ebno_grid), len(self.ratio_bins), len(self.quality_levels))
        for kind, arr in self.gains.items():
            self.gains[kind] = np.asarray(arr, dtype=np.float64)
            if self.gains[kind].shape != shape:
                raise ValueError(f"gain grid for {kind} has shape {self.gains[kind].shape}")
            if not np.isfinite(self.gains[kind]).all():
                raise ValueError(f"gain grid for {kind} has non-finite entries")

    def _ebno_index(self, ebno_db: float) -> int:
        return int(np.argmin(np.abs(np.asarray(self.ebno_grid) - ebno_db)))

    def _ratio_index(self, text_fraction: float) -> int:
        fracs = np.asarray([t / (t + i) for t, i in self.ratio_bins])
        return int(np.argmin(np.abs(fracs - text_fraction)))

    def _quality_index(self, quality_level: int) -> int:
        return int(np.argmin(np.abs(np.asarray(self.quality_levels) - quality_level)))

    def gain(self, kind: str, ebno_db: float, text_fraction: float, quality_level: int) -> float:
        arr = self.gains[kind]
        return float(
            arr[
                self._ebno_index(ebno_db),
                self._ratio_index(text_fraction),
                self._quality_index(quality_level),
            ]
        )

    def rate_mb_per_tick(self, kind, ebno_db, text_fraction, quality_level,
                         base_rate=BASE_RATE_MB_PER_TICK) -> float:
        return base_rate * (1.0 + self.gain(kind, ebno_db, text_fraction, quality_level))

    def to_json(self) -> str:
        return json.dumps(
            {
                "ebno_grid": list(self.ebno_grid),
                "ratio_bins": [list(b) for b in self.ratio_bins],
                "quality_levels": list(self.quality_levels),
                "gains": {k: v.tolist() for k, v in self.gains.items()},
            },
            indent=1,
        )

    @classmethod
    def from_json(cls, text: str) -> "GainTable":
        d = json.loads(text)
        return cls(
            ebno_grid=tuple(d["ebno_grid"]),
            ratio_bins=tuple(tuple(b) for b in d["ratio_bins"]),
            quality_levels=tuple(d["quality_levels"]),
            gains={k: np.asarray(v) for k, v in d["gains"].items()},
        )


# --------------------------------------------------------------------------
# transfer gain measurement (shared by the table builder and the CLI sweeps)


def pooled_performance(total_codewords, retransmissions, payload_bits_per_codeword,
                       params: approxtx.ThroughputParams) -> float:
    """Reciprocal transfer time of a pooled batch of pages."""
    stats = approxtx.TransferStats(total_codewords, retransmissions, None)
    payload_bytes = total_codewords * payload_bits_per_codeword / 8.0
    return approxtx.performance(approxtx.transfer_time(stats, params, payload_bytes))


def run_transfer_batch(code, mapping, cfg, n_pages, page_codewords, master_seed,
                       list_size=fec.DEFAULT_LIST_SIZE):
    """Pooled (total, retransmissions) over random pages.

    Page i draws its payload from substream (seed, i, 0) and every codeword
    is noise-keyed by its global index, so two mappings measured with the
    same seed see identical pages and identical per-attempt channel noise.
    All pages decode together in large batches.
    """
    ratio = (len(mapping.stream_positions["text"]), len(mapping.stream_positions["image"]))
    from .approxtx.transfer import _assemble_bits, retransmit_until_clean

    blocks = []
    for i in range(n_pages):
        page = approxtx.make_webpage(ratio, page_codewords, substream(master_seed, i, 0))
        blocks.append(_assemble_bits(page, mapping))
    sent = np.concatenate(blocks, axis=0)
    retx, _ = retransmit_until_clean(
        sent, mapping.protected, code, cfg, mix_seed(master_seed, 1), list_size=list_size
    )
    return sent.shape[0], retx


def measure_webpage_gain(
    code,
    profile,
    cfg: ChannelConfig,
    ratio,
    quality_level,
    n_pages,
    page_codewords,
    master_seed,
    params: approxtx.ThroughputParams = approxtx.ThroughputParams(),
    baseline_counts=None,
):
    """Performance gain of selective protection over the full-protection
    baseline, pooled over ``n_pages`` pages with paired noise substreams.

    The baseline transmits the same pages under the same noise, so its
    pooled retransmission count dominates the selective one and the gain is
    never negative. ``baseline_counts`` lets callers reuse one baseline run
    across quality levels of the same ratio.
    """
    mapping = approxtx.build_webpage_mapping(profile, ratio, quality_level)
    bits_per_cw = sum(ratio)
    tot_p, retx_p = run_transfer_batch(code, mapping, cfg, n_pages, page_codewords, master_seed)
    if baseline_counts is None:
        baseline_counts = run_transfer_batch(
            code, mapping.fully_protected(), cfg, n_pages, page_codewords, master_seed
        )
    tot_b, retx_b = baseline_counts
    perf_p = pooled_performance(tot_p, retx_p, bits_per_cw, params)
    perf_b = pooled_performance(tot_b, retx_b, bits_per_cw, params)
    return {
        "gain": approxtx.performance_gain(perf_p, perf_b),
        "loss_fraction": retx_p / (tot_p + retx_p),
        "baseline_loss_fraction": retx_b / (tot_b + retx_b),
        "baseline_counts": baseline_counts,
    }


def measure_video_gain(
    code,
    profile,
    cfg: ChannelConfig,
    protected_pframes: int,
    frames,
    n_gops: int,
    master_seed: int,
    params: approxtx.ThroughputParams = approxtx.ThroughputParams(),
    baseline_counts=None,
):
    """GOP-transfer gain of selective P-frame protection over full protection,
    plus the mean received video quality (MS-SSIM over frames).

    The reference for quality is the GOP reconstructed from the transmitted
    difference representation, so full protection scores exactly 1.0.
    """
    payload = approxtx.GopPayload.from_frames(frames)
    mapping = approxtx.build_video_mapping(profile, protected_pframes, payload.n_pframes)
    reference = payload.reconstruct_frames()
    bits_per_cw = len(mapping.stream_positions["frame0"]) * (payload.n_pframes + 1)

    total = retx = 0
    scores = []
    for g in range(n_gops):
        stats = approxtx.simulate_transfer(payload, mapping, code, cfg, mix_seed(master_seed, g))
        total += stats.total_codewords
        retx += stats.retransmissions
        scores.append(
            approxtx.gop_quality(reference, stats.received_payload.reconstruct_frames())
        )
    if baseline_counts is None:
        base_map = mapping.fully_protected()
        tot_b = retx_b = 0
        for g in range(n_gops):
            st = approxtx.simulate_transfer(payload, base_map, code, cfg, mix_seed(master_seed, g))
            tot_b += st.total_codewords
            retx_b += st.retransmissions
        baseline_counts = (tot_b, retx_b)
    tot_b, retx_b = baseline_counts
    perf_p = pooled_performance(total, retx, bits_per_cw, params)
    perf_b = pooled_performance(tot_b, retx_b, bits_per_cw, params)
    return {
        "gain": approxtx.performance_gain(perf_p, perf_b),
        "quality": float(np.mean(scores)),
        "loss_fraction": retx / (total + retx),
        "baseline_counts": baseline_counts,
    }


def _default_code(kind: str, design_ebno_db: float = 2.0):
    if kind == fec.POLAR:
        return fec.construct_polar_code(1024, 512, design_ebno_db, fec.DEFAULT_CRC_LEN)
    return fec.generate_ldpc_code(1024, 512, seed=1)


def build_gain_table(
    ebno_grid=EBNO_GRID,
    ratio_bins=RATIO_BINS,
    quality_levels=QUALITY_LEVELS,
    master_seed: int = 1234,
    char_trials: int = 2000,
    n_pages: int = 50,
    page_codewords: int = 4,
    parallel: int = 1,
) -> GainTable:
    """Run the characterization pipeline over the whole grid.

    Deterministic in ``master_seed`` and independent of ``parallel``: every
    (kind, ebno) column derives its substreams from the master seed alone.
    """
    jobs = [(kind, i) for kind in (fec.LDPC, fec.POLAR) for i in range(len(ebno_grid))]
    args = [
        (kind, i, ebno_grid[i], ratio_bins, quality_levels, master_seed,
         char_trials, n_pages, page_codewords)
        for kind, i in jobs
    ]
    if parallel > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=parallel) as pool:
            results = list(pool.map(_gain_column, args))
    else:
        results = [_gain_column(a) for a in args]

    shape = (len(ebno_grid), len(ratio_bins), len(quality_levels))
    gains = {fec.LDPC: np.zeros(shape), fec.POLAR: np.zeros(shape)}
    for (kind, i), col in zip(jobs, results):
        gains[kind][i] = col
    return GainTable(tuple(ebno_grid), tuple(tuple(b) for b in ratio_bins),
                     tuple(quality_levels), gains)


def _gain_column(args):
    (kind, ebno_idx, ebno, ratio_bins, quality_levels, master_seed,
     char_trials, n_pages, page_codewords) = args
    code = _default_code(kind)
    kind_tag = 0 if kind == fec.LDPC else 1
    cfg = ChannelConfig(ebno, fec.code_rate(code),
                        rng_seed=mix_seed(master_seed, kind_tag, ebno_idx, 0))
    profile = uep.characterize(code, cfg, char_trials)
    col = np.zeros((len(ratio_bins), len(quality_levels)))
    for ri, ratio in enumerate(ratio_bins):
        # one seed per ratio: the baseline run is shared by its quality levels
        seed = mix_seed(master_seed, kind_tag, ebno_idx, 1 + ri)
        baseline = None
        for qi, q in enumerate(quality_levels):
            res = measure_webpage_gain(
                code, profile, cfg, ratio, q, n_pages, page_codewords,
                master_seed=seed, baseline_counts=baseline,
            )
            baseline = res["baseline_counts"]
            col[ri, qi] = res["gain"]
    return col


def mix_seed(*parts) -> int:
    """Stable composite seed from integer parts."""
    h = 0
    for p in parts:
        h = (h * 1_000_003 + int(p) + 1) % (2**63)
    return h


# --------------------------------------------------------------------------
# workload sampling and the tick-stepped base-station simulation


@dataclass
class SimConfig:
    num_ldpc: int = 4
    num_polar: int = 2
    injection_prob: float = 0.5
    ebno_db: float = 1.5
    horizon_ticks: int = 1500
    quality_level: int = 1
    master_seed: int = 0
    algorithm: str = "minqueue"
    base_rate_mb_per_tick: float = BASE_RATE_MB_PER_TICK
    tick_ms: float = 1.0  # nominal wall duration of one tick; metrics stay in ticks
    drain: bool = True
    smab_alpha: float = sched.DEFAULT_UCB_ALPHA
    smab_c: float = sched.DEFAULT_UCB_C
    smab_sigma_frac: float = sched.DEFAULT_GAIN_SIGMA_FRAC

    def __post_init__(self):
        if self.num_ldpc + self.num_polar < 1:
            raise ValueError("need at least one encoder node")
        if not 0.0 <= self.injection_prob <= 1.0:
            raise ValueError("injection probability must be in [0, 1]")
        if self.horizon_ticks <= 0:
            raise ValueError("horizon must be positive")
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")


def sample_workload(
    rng: np.random.Generator,
    job_id: int = 0,
    arrival_time: float = 0.0,
    table: GainTable | None = None,
    ebno_db: float = 1.5,
    quality_level: int = 1,
    base_rate: float = BASE_RATE_MB_PER_TICK,
) -> sched.WorkloadJob:
    """Draw one workload: size ~ Gamma(2, 1.5) MB, text fraction ~ Beta(0.6, 1.8)."""
    size = float(rng.gamma(2.0, 1.5))
    size = max(size, 1e-6)
    frac = float(rng.beta(0.6, 1.8))
    if table is not None:
        rate_l = table.rate_mb_per_tick(fec.LDPC, ebno_db, frac, quality_level, base_rate)
        rate_p = table.rate_mb_per_tick(fec.POLAR, ebno_db, frac, quality_level, base_rate)
    else:
        rate_l = rate_p = base_rate
    return sched.WorkloadJob(
        job_id=job_id,
        size_mb=size,
        text_fraction=frac,
        quality_level=quality_level,
        arrival_time=arrival_time,
        proc_time_ldpc=size / rate_l,
        proc_time_polar=size / rate_p,
    )


def _job_gains(job: sched.WorkloadJob, table: GainTable | None, ebno_db: float):
    """Mean gain of this job on each encoder kind (its table cell); these are
    the WFTM weights w_ij and the SMAB Gain_Perf_ij means."""
    if table is None:
        return {fec.LDPC: 1.0, fec.POLAR: 1.0}
    return {
        kind: table.gain(kind, ebno_db, job.text_fraction, job.quality_level)
        for kind in (fec.LDPC, fec.POLAR)
    }


def run_simulation(cfg: SimConfig, table: GainTable | None = None):
    """Tick-stepped simulation; returns (SchedMetrics, trace).

    Per tick: at most one Bernoulli(injection_prob) arrival is sampled,
    assigned immediately by the configured algorithm, and every node
    processes one tick of work. After the horizon the queues drain.
    Arrival and algorithm randomness use separate substreams so arrival
    sequences pair across node configurations with the same seed.
    """
    nodes = [sched.EncoderNode(i, sched.LDPC) for i in range(cfg.num_ldpc)] + [
        sched.EncoderNode(cfg.num_ldpc + j, sched.POLAR) for j in range(cfg.num_polar)
    ]
    arr_rng = substream(cfg.master_seed, 0)
    algo_rng = substream(cfg.master_seed, 1)
    state = sched.SmabState(
        len(nodes), alpha=cfg.smab_alpha, c=cfg.smab_c, gain_sigma_frac=cfg.smab_sigma_frac
    )

    trace = []
    starts = {}
    job_id = 0
    tick = 0
    while True:
        arriving = tick < cfg.horizon_ticks and arr_rng.random() < cfg.injection_prob
        if arriving:
            job = sample_workload(
                arr_rng, job_id, float(tick), table, cfg.ebno_db, cfg.quality_level,
                cfg.base_rate_mb_per_tick,
            )
            job_id += 1
            gains = _job_gains(job, table, cfg.ebno_db)
            nid = _assign(cfg.algorithm, job, nodes, gains, state, algo_rng)
            nodes[nid].push(job)
        for node in nodes:
            _advance_one_tick(node, tick, trace, starts)
        tick += 1
        if tick >= cfg.horizon_ticks:
            if not cfg.drain or all(n.occupancy == 0 for n in nodes):
                break
    return sched.compute_metrics(trace), trace


def _assign(algorithm, job, nodes, gains, state, rng) -> int:
    if algorithm == "wftm":
        # a zero measured gain zeroes the weighted objective; the tiny floor
        # lets such ties resolve toward the emptier node instead of node 0
        weights = [max(gains[n.kind], 1e-9) for n in nodes]
        return sched.wftm_assign(job, nodes, weights)
    if algorithm == "random":
        return sched.random_assign(job, nodes, rng)
    if algorithm == "minqueue":
        return sched.minqueue_assign(job, nodes)
    nid = sched.smab_assign(job, state, nodes)
    reward = sched.smab_reward(gains[nodes[nid].kind], nodes[nid].occupancy, state, rng)
    sched.smab_update(state, nid, reward)
    return nid


def _advance_one_tick(node: sched.EncoderNode, tick: int, trace, starts) -> None:
    budget = 1.0
    while budget > 1e-12:
        if node.current is None:
            if not node.queue:
                return
            job = node.queue.pop(0)
            node.current = [job, job.proc_time_on(node.kind)]
            starts[job.job_id] = tick + (1.0 - budget)
        job, remaining = node.current
        step = min(budget, remaining)
        budget -= step
        remaining -= step
        node.remaining_work = max(node.remaining_work - step, 0.0)
        if remaining <= 1e-12:
            finish = tick + (1.0 - budget)
            trace.append(
                sched.CompletedJob(
                    job_id=job.job_id,
                    arrival=job.arrival_time,
                    node_id=node.node_id,
                    kind=node.kind,
                    start=starts.pop(job.job_id),
                    finish=finish,
                    size_mb=job.size_mb,
                    proc_time=job.proc_time_on(node.kind),
                )
            )
            node.current = None
        else:
            node.current = [job, remaining]


# --------------------------------------------------------------------------
# scenario study


def run_scenario_comparison(
    base_cfg: SimConfig,
    table: GainTable,
    scenarios: dict = None,
    ebno_grid=None,
    injection_grid=(0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0),
    seeds=(0, 1, 2, 3, 4),
    reference: str = "4L",
):
    """Performance of each encoder scenario across the grid, with the gain
    over the reference scenario paired per seed.

    Returns a list of row dicts (scenario, ebno_db, injection_prob, seed,
    perf, gain_pct_vs_4L). Performance is the reciprocal of the time to
    finish every workload (the makespan of the drained trace).
    """
    scenarios = dict(SCENARIOS if scenarios is None else scenarios)
    if reference not in scenarios:
        raise ValueError(f"reference scenario {reference!r} not among scenarios")
    ebno_grid = list(table.ebno_grid if ebno_grid is None else ebno_grid)

    perfs = {}
    for name, (m, n) in scenarios.items():
        for ebno in ebno_grid:
            for inj in injection_grid:
                for seed in seeds:
                    cfg = replace(
                        base_cfg, num_ldpc=m, num_polar=n, ebno_db=ebno,
                        injection_prob=inj, master_seed=seed,
                    )
                    metrics, _ = run_simulation(cfg, table)
                    perf = 1.0 / metrics.makespan if metrics.makespan > 0 else math.nan
                    perfs[(name, ebno, inj, seed)] = perf

    rows = []
    for name in scenarios:
        for ebno in ebno_grid:
            for inj in injection_grid:
                for seed in seeds:
                    perf = perfs[(name, ebno, inj, seed)]
                    ref = perfs[(reference, ebno, inj, seed)]
                    rows.append(
                        {
                            "scenario": name,
                            "ebno_db": ebno,
                            "injection_prob": inj,
                            "seed": seed,
                            "perf": perf,
                            "gain_pct_vs_4L": 100.0 * (perf - ref) / ref,
                        }
                    )
    return rows


def gain_surface(rows, scenario: str):
    """Seed-averaged gain per (ebno_db, injection_prob) cell for one scenario."""
    cells = {}
    for r in rows:
        if r["scenario"] != scenario:
            continue
        cells.setdefault((r["ebno_db"], r["injection_prob"]), []).append(r["gain_pct_vs_4L"])
    return {cell: float(np.mean(v)) for cell, v in sorted(cells.items())}
