"""Disambiguation methods as linear separators, and SNOW."""

from .feature_space import Example, Feature, FeatureSpace, TaskDef, Token, encode
from .lin_sep import LinearSeparator, Prediction, activation, perf, predict_binary
from .winnow import WinnowConfig, WinnowLearner, train_stream
from .snow import SnowNetwork
from .baselines import (
    BackoffModel, DecisionList, NbParams, bo_fit, bo_predict, bo_to_linear, dl_evaluate, dl_fit,
    dl_to_linear, nb_fit, nb_predict, nb_to_linear,
)

__version__ = "0.1.0"
