r"""
Copyright 2026 The trajectory_uncertainty developers

Licensed under the MIT License. See the LICENSE file in the project root.
"""

from trajectory_uncertainty.experiment.cli import main

if __name__ == "__main__":
    main()
