import numpy as np

from pinet_refine.exception import ShapeMismatchError


def l1_loss(pred: np.ndarray, target: np.ndarray) -> float:
    """Mean absolute elementwise difference."""
    pred = np.asarray(pred, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    if pred.shape != target.shape:
        raise ShapeMismatchError(f"l1_loss: {pred.shape} vs {target.shape}")
    return float(np.mean(np.abs(pred - target)))


def l1_loss_backward(pred: np.ndarray, target: np.ndarray) -> np.ndarray:
    """d loss / d pred; the subgradient at zero difference is 0."""
    pred = np.asarray(pred, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    if pred.shape != target.shape:
        raise ShapeMismatchError(f"l1_loss: {pred.shape} vs {target.shape}")
    return np.sign(pred - target) / pred.size


__all__ = [
    "l1_loss",
    "l1_loss_backward",
]
