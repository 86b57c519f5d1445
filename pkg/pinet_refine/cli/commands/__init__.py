from .base import BaseCommand
from .gen import GenCommand
from .train import TrainCommand
from .refine import RefineCommand
from .eval import EvalCommand
from .gradcheck import GradCheckCommand
from .ablate import AblateCommand

__all__ = [
    "BaseCommand",
    "GenCommand",
    "TrainCommand",
    "RefineCommand",
    "EvalCommand",
    "GradCheckCommand",
    "AblateCommand",
]
