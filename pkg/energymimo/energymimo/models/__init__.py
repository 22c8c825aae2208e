from .AsymptoticPlan import AsymptoticPlan
from .BsModel import BsModel
from .CellGeometry import CellGeometry
from .ChannelRealization import ChannelKind, ChannelRealization
from .FixedPointConfig import FixedPointConfig
from .OracleResult import OracleMethod, OracleResult
from .PaModel import PaModel
from .PowerReport import PowerReport
from .PrecoderSolution import PrecoderSolution
from .QosTargets import QosTargets
from .ScenarioConfig import ExperimentConfig, ScenarioConfig, dbm_to_watts

__all__ = ['AsymptoticPlan', 'BsModel', 'CellGeometry', 'ChannelKind',
           'ChannelRealization', 'ExperimentConfig', 'FixedPointConfig',
           'OracleMethod', 'OracleResult', 'PaModel', 'PowerReport',
           'PrecoderSolution', 'QosTargets', 'ScenarioConfig',
           'dbm_to_watts']
