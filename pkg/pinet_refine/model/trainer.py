import json
import logging
import math
import time
from typing import Callable, Optional, Sequence

from tqdm import tqdm

from pinet_refine.base import BaseModel
from pinet_refine.exception import EmptyInputError, MissingGroundTruthError, NonFiniteLossError
from pinet_refine.nn import TrainConfig, adam_step, make_rng, poly_lr
from pinet_refine.skeleton import NormStats, Scene
from .checkpoint import Checkpoint, CheckpointHeader
from .config import ModelConfig
from .network import PiNet, init_params, input_stats

logger = logging.getLogger(__name__)


class EpochRecord(BaseModel):
    epoch: int
    loss: float
    lr: float
    steps: int
    wall_time_s: float


class TrainResult(BaseModel):
    checkpoint: Checkpoint
    history: list[EpochRecord]


def training_stats(dataset: Sequence[Scene], config: ModelConfig) -> NormStats:
    """Normalization statistics over every input pose of the training split, in the network frame."""
    return input_stats([pose for scene in dataset for pose in scene.poses], config)


def train(
    dataset: Sequence[Scene],
    config: ModelConfig,
    tcfg: TrainConfig,
    stats: Optional[NormStats] = None,
    on_epoch: Optional[Callable[[EpochRecord], None]] = None,
    progress: bool = False,
) -> TrainResult:
    """
    Fit the network on `dataset`.

    Each epoch shuffles the scenes with the seeded generator; every visit of a
    scene refines it under the ordering of its next person-of-interest
    (round-robin over its persons). Gradients of `batch_size` scenes are
    averaged before one Adam step with the poly learning rate, scheduled per
    optimizer step.

    Args:
        dataset: (Sequence[Scene]) training scenes, all with ground truth.
        config: (ModelConfig) network shape and switches.
        tcfg: (TrainConfig) optimizer, schedule, epochs and seed.
        stats: (Optional[NormStats]) frozen statistics; computed from the
            dataset's input poses when omitted.
        on_epoch: (Optional[Callable]) called with every epoch record.
        progress: (bool) show a progress bar.

    Returns:
        TrainResult: the checkpoint and the per-epoch records.

    Raises:
        NonFiniteLossError: with the index of the offending scene.
    """
    if len(dataset) == 0:
        raise EmptyInputError("cannot train on an empty dataset")
    for s, scene in enumerate(dataset):
        if scene.gt is None:
            raise MissingGroundTruthError(f"training scene {s} has no ground truth")

    stats = stats if stats is not None else training_stats(dataset, config)
    store = init_params(config, tcfg.seed)
    model = PiNet(config, store, stats)
    rng = make_rng([tcfg.seed, 1])

    steps_per_epoch = math.ceil(len(dataset) / tcfg.batch_size)
    total_steps = tcfg.epochs * steps_per_epoch
    visits = [0] * len(dataset)
    step = 0
    history: list[EpochRecord] = []

    logger.info(
        "training %d scenes for %d epochs (%d steps, batch %d)",
        len(dataset),
        tcfg.epochs,
        total_steps,
        tcfg.batch_size,
    )
    epochs = tqdm(range(tcfg.epochs), desc="train", unit="epoch", disable=not progress)
    for epoch in epochs:
        started = time.perf_counter()
        order = rng.permutation(len(dataset))
        loss_sum = 0.0
        lr = tcfg.lr_init
        for start in range(0, len(order), tcfg.batch_size):
            batch = order[start : start + tcfg.batch_size]
            for s in batch:
                s = int(s)
                scene = dataset[s]
                n = visits[s] % scene.num_persons
                visits[s] += 1
                loss = model.forward_train(scene, n, backward=True).loss
                if not math.isfinite(loss):
                    logger.error("non-finite loss on scene %d at step %d", s, step)
                    raise NonFiniteLossError(scene_index=s, loss=loss)
                loss_sum += loss
            store.scale_grad(1.0 / len(batch))
            lr = poly_lr(step, total_steps, tcfg)
            adam_step(store, lr, step + 1, tcfg)
            step += 1

        record = EpochRecord(
            epoch=epoch + 1,
            loss=loss_sum / len(dataset),
            lr=lr,
            steps=step,
            wall_time_s=time.perf_counter() - started,
        )
        history.append(record)
        logger.info(json.dumps(record.model_dump()))
        epochs.set_postfix(loss=f"{record.loss:.2f}")
        if on_epoch is not None:
            on_epoch(record)

    header = CheckpointHeader(config=config, train_config=tcfg, seed=tcfg.seed, step=step)
    return TrainResult(
        checkpoint=Checkpoint(header=header, stats=stats, params=store),
        history=history,
    )


__all__ = [
    "EpochRecord",
    "TrainResult",
    "training_stats",
    "train",
]
