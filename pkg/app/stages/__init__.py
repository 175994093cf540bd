"""
Pipeline stages of the ACV pipeline.
Each stage is a callable taking the graph state and returning a state update.
"""

from app.stages.base import Stage
from app.stages.charts import ChartStage
from app.stages.critical import CriticalStage
from app.stages.newton import NewtonStage
from app.stages.verify import VerifyStage
from app.stages.witness import WitnessStage

__all__ = ["Stage", "NewtonStage", "ChartStage", "CriticalStage", "WitnessStage", "VerifyStage"]
