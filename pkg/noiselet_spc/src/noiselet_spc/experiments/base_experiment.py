"""Generic base class for seeded imaging experiments."""

import logging
import os

from noiselet_spc import util

logger = logging.getLogger(__name__)


class BaseExperiment:
    """Generic base class for seeded imaging experiments.

    Concrete subclasses should:
    - List the independent cells of the experiment (e.g. sampling ratio x seed).
    - Run one cell from its parameters alone, so cells can go to worker processes.
    - Name the stats columns every cell reports.
    """

    stats_columns = []

    def __init__(self, out_dir=None):
        """Prepare the output directory and a timestamped stats file name."""
        self.out_dir = out_dir or util.get_param('out', 'out')
        os.makedirs(self.out_dir, exist_ok=True)
        self.timestamp = util.get_timestamp()
        self.stats_filename = os.path.join(self.out_dir, "{}_{}.csv".format(self.name, self.timestamp))

    @property
    def name(self):
        return self.__class__.__name__.lower()

    def cells(self):
        """Return the list of cell parameter tuples.

        Returns
        =======
        list of tuples, each accepted by run_cell()
        """
        raise NotImplementedError("{} must override cells()".format(self.__class__.__name__))

    def run_cell(self, cell):
        """Run one cell and return its stats row.

        Params
        ======
        - cell: one tuple from cells()

        Returns
        =======
        list of values in the order of stats_columns
        """
        raise NotImplementedError("{} must override run_cell()".format(self.__class__.__name__))

    def write_stats(self, rows):
        """Append stats rows to this experiment's CSV file."""
        util.write_stats(self.stats_filename, rows, self.stats_columns)
        logger.info("saved %d rows of %s to %s", len(rows), self.stats_columns, self.stats_filename)
