"""
Self-attention over the per-person embeddings:

    W_nm = e_n^T (A e_m + b),  rows soft-maxed,  u_n = sum_m W_nm e_m

The bias term adds e_n^T b to a whole row, which the row softmax cancels, so
its gradient is identically zero. It is kept for parity of the parameter set.
"""

from dataclasses import dataclass

import numpy as np

from pinet_refine.exception import EmptyInputError, ShapeMismatchError
from pinet_refine.nn import Param, ParameterStore, softmax_rows, softmax_rows_backward


@dataclass(frozen=True)
class AttentionParams:
    A: Param
    b: Param

    @classmethod
    def from_store(cls, store: ParameterStore, prefix: str = "att") -> "AttentionParams":
        return cls(A=store[f"{prefix}.A"], b=store[f"{prefix}.b"])


def attention_scores(Emat: np.ndarray, att: AttentionParams, rows: slice = slice(None)):
    """Raw scores for the selected rows, shape (len(rows), N), plus the cache for backward."""
    if Emat.ndim != 2 or Emat.shape[0] == 0:
        raise EmptyInputError("attention needs a non-empty embedding matrix")
    if att.A.shape != (Emat.shape[1], Emat.shape[1]):
        raise ShapeMismatchError(f"A {att.A.shape} does not match embeddings {Emat.shape}")
    M = Emat @ att.A.value.T + att.b.value
    return Emat[rows] @ M.T, M


def attention_scores_backward(
    dS: np.ndarray, Emat: np.ndarray, M: np.ndarray, att: AttentionParams
) -> np.ndarray:
    """Gradient w.r.t. Emat of the full N x N scores."""
    dE = dS @ M
    dM = dS.T @ Emat
    att.A.grad += dM.T @ Emat
    att.b.grad += dM.sum(axis=0)
    return dE + dM @ att.A.value


def attention_weights(Emat: np.ndarray, att: AttentionParams) -> np.ndarray:
    """Row-softmax-normalised N x N attention weights."""
    S, _ = attention_scores(Emat, att)
    return softmax_rows(S)


def apply_attention(W: np.ndarray, Emat: np.ndarray) -> np.ndarray:
    """u = W E; row n mixes every embedding with weights W[n]."""
    if W.ndim != 2 or W.shape[1] != Emat.shape[0]:
        raise ShapeMismatchError(f"weights {W.shape} cannot mix embeddings {Emat.shape}")
    return W @ Emat


def attention_forward(Emat: np.ndarray, att: AttentionParams):
    S, M = attention_scores(Emat, att)
    P = softmax_rows(S)
    return apply_attention(P, Emat), (Emat, M, P)


def attention_backward(dU: np.ndarray, cache, att: AttentionParams) -> np.ndarray:
    Emat, M, P = cache
    dP = dU @ Emat.T
    dE = P.T @ dU
    dS = softmax_rows_backward(dP, P)
    return dE + attention_scores_backward(dS, Emat, M, att)


__all__ = [
    "AttentionParams",
    "attention_scores",
    "attention_scores_backward",
    "attention_weights",
    "apply_attention",
    "attention_forward",
    "attention_backward",
]
