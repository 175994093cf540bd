"""
Orchestrator module for the ACV pipeline.
Contains the LangGraph state machine and workflow definitions.
"""

from .state import Command, PipelineState, ProblemSpec, RunReport, create_initial_state

__all__ = ["Command", "PipelineState", "ProblemSpec", "RunReport", "create_initial_state"]
