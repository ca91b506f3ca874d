from .network import Architecture, Model, cross_entropy, microvd_architecture
from .sgd import TrainingConfig, sgd_step
from .checkpoint import load_checkpoint, save_checkpoint
from .training import EpochStats, train, write_training_log
from .gradcam import gradcam, heatmap_to_u8, overlay_heatmap

__all__ = [
    "Architecture",
    "Model",
    "TrainingConfig",
    "EpochStats",
    "cross_entropy",
    "gradcam",
    "heatmap_to_u8",
    "load_checkpoint",
    "microvd_architecture",
    "overlay_heatmap",
    "save_checkpoint",
    "sgd_step",
    "train",
    "write_training_log",
]
