"""Predict silent-data-corruption counts for every executable-assertion
configuration of a workload from a single fault-injection campaign."""

from .campaign import CampaignResult, FaultRecord, load, run_discovery, save
from .configuration import Configuration
from .faultspace import FaultClass, build_classes, total_area
from .interp import ExperimentResult, GoldenTrace, Outcome, golden_run, run_experiment
from .lang import Program, list_assertions, parse, render_source
from .oracle import ground_truth, strip, verify
from .predictor import Counts, PredictedCounts, Predictor, excluded_times, predict, predict_all
from .render import render_svg
from .search import GAParams, SearchOutcome, exhaustive, ga, greedy

__all__ = [
    "CampaignResult", "Configuration", "Counts", "ExperimentResult", "FaultClass",
    "FaultRecord", "GAParams", "GoldenTrace", "Outcome", "PredictedCounts", "Predictor",
    "Program", "SearchOutcome", "build_classes", "excluded_times", "exhaustive", "ga",
    "golden_run", "greedy", "ground_truth", "list_assertions", "load", "parse", "predict",
    "predict_all", "render_source", "render_svg", "run_discovery", "run_experiment", "save",
    "strip", "total_area", "verify",
]
