from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional


@dataclass
class BoundsConfig:
    num_bound: int = 4
    set_bound: int = 5


@dataclass
class SuiteConfig:
    trials: int = 200
    rule_trials: int = 1000
    seed: int = 7
    max_value: int = 6
    set_universe: int = 6


@dataclass
class ReportConfig:
    schema: str = "condmodel/1"
    output_dir: Path = Path("reports")
    indent: int = 2


@dataclass
class NormConfig:
    tolerance: Fraction = Fraction(1, 10**6)


@dataclass
class MongoDBConfig:
    host: str = "localhost"
    port: int = 27017
    username: str = "admin"
    password: str = "password"
    database: str = "condmodel"


@dataclass
class CollectionNames:
    eval_reports: str = "eval_reports"
    suite_reports: str = "suite_reports"
    argmin_reports: str = "argmin_reports"
    bw_reports: str = "bw_reports"


@dataclass
class VisualizationConfig:
    output_dir: Path = Path("plots")
    figure_size_large: tuple = (12, 6)
    dpi: int = 150


@dataclass
class RunConfig:
    """Settings of one command-line run, assembled from flags."""

    space_path: Optional[Path] = None
    num_bound: int = BoundsConfig.num_bound
    set_bound: int = BoundsConfig.set_bound
    assignment_path: Optional[Path] = None
    trials: Optional[int] = None
    seed: int = SuiteConfig.seed
    out_path: Optional[Path] = None
    store: bool = False
    plot: bool = False
    quiet: bool = False


BOUNDS = BoundsConfig()
SUITE = SuiteConfig()
REPORTS = ReportConfig()
NORM = NormConfig()
MONGODB = MongoDBConfig()
COLLECTIONS = CollectionNames()
VIZ_CONFIG = VisualizationConfig()
