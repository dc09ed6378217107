# SUPREMA - SUPremum densities of stable Lévy processes: REference, Monte carlo, Asymptotics
__version__ = "1.0.0"
