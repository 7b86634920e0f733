from .backend import active_backend, available_backends
from .power import PowerEvaluator, annual_power, power_sea_state, q_factor
from .system import (Coupling, FarmSystem, assemble_farm_system, power_regular,
                     solve_motion)
from .tables import (GRAVITY, RHO, BuoySpec, HydroTable, default_buoy_spec,
                     default_hydro_table, load_table_csv, save_table_csv)

__all__ = [
    "active_backend", "available_backends",
    "PowerEvaluator", "annual_power", "power_sea_state", "q_factor",
    "Coupling", "FarmSystem", "assemble_farm_system", "power_regular", "solve_motion",
    "GRAVITY", "RHO", "BuoySpec", "HydroTable", "default_buoy_spec",
    "default_hydro_table", "load_table_csv", "save_table_csv",
]
