from .mie import MieSeries, choose_truncation, solve_soundsoft, solve_penetrable, solve_for

__all__ = ["MieSeries", "choose_truncation", "solve_soundsoft", "solve_penetrable", "solve_for"]
