# sys
import glob
import logging
import os

from feeder.instance import parse_instance
from utils.errors import TropError
from utils.general import humanSort, load

logger = logging.getLogger(__name__)


class Feeder:
    """ Feeder for batches of instance files
    Arguments:
        directory: folder holding the '.json' instance files
        params: parameter overrides applied to every instance that declares them
    """

    def __init__(self,
                 directory,
                 params=None):
        self.directory = directory
        self.params    = params or {}
        self.load_data()


    def load_data(self):
        if not os.path.isdir(self.directory):
            raise NotADirectoryError(self.directory)
        self.paths = humanSort(glob.glob(os.path.join(self.directory, '*.json')))
        logger.info('%d instance files in %s', len(self.paths), self.directory)

    def __len__(self):
        return len(self.paths)

    def __getitem__(self, index):
        # (path, Instance) or (path, error) for files that do not validate
        path = self.paths[index]
        try:
            inst = parse_instance(path, self._params_for(path))
        except TropError as err:
            return path, err
        return path, inst

    def _params_for(self, path):
        # Overrides only touch parameters the file declares
        try:
            data = load(path)
        except ValueError:
            return {}
        declared = data.get('parameters', {}) if isinstance(data, dict) else {}
        return {k: v for k, v in self.params.items() if k in declared}
