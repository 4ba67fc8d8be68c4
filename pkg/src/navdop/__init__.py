"""Desk-scale navigation accuracy analysis for optical, pulsar and range data."""
from .kinematics import AU_KM, OrbitConfig, stm_exact, stm_jet, stm_error_norm
from .geometry import SceneConfig
from .information import InfoMatrix4, DilutionResult, position_covariance, dilution

__all__ = ["AU_KM", "OrbitConfig", "SceneConfig", "InfoMatrix4", "DilutionResult",
           "stm_exact", "stm_jet", "stm_error_norm", "position_covariance", "dilution"]
__version__ = "0.1.0"
