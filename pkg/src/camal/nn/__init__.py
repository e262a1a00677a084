from camal.nn.functional import conv1d, gap, relu, sigmoid, softmax, standardize
from camal.nn.resnet import ResidualBlock, ResNetModel, build_resnet
from camal.nn.train import TrainConfig, backward_gradients, train
from camal.nn.checkpoint import load_checkpoint, save_checkpoint

__all__ = [
    "conv1d",
    "gap",
    "relu",
    "sigmoid",
    "softmax",
    "standardize",
    "ResidualBlock",
    "ResNetModel",
    "build_resnet",
    "TrainConfig",
    "backward_gradients",
    "train",
    "load_checkpoint",
    "save_checkpoint",
]
