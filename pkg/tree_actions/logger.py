import os
import logging


class Logger():
    """
    A thin wrapper creating a named logger with console and file handlers.

    All classes in the package create their logger through this wrapper so
    that every message shares the same format. The file handler is optional
    and is configured once for the whole application through the class
    attribute log_file (set by the CLI from the [logging] section of app.cfg).

    Attributes
    ----------
    log_file: str or None
        Path of the shared log file, None to log to the console only
    """
    log_file = None
    logger = None
    logger_name = None
    log_level = None

    def __init__(self, logger_name, log_level):

        # create logger
        logger = logging.getLogger(logger_name)
        logger.setLevel(log_level)
        logger.propagate = True

        # handlers are attached once per logger name
        if not logger.handlers:

            # create formatter
            formatter = logging.Formatter(
                '%(asctime)s %(filename)20s %(funcName)20s '
                '%(levelname)8s: %(message)s'
            )

            # create console handler
            ch = logging.StreamHandler()
            ch.setLevel(logging.DEBUG)
            ch.setFormatter(formatter)
            logger.addHandler(ch)

            # create file handler
            if self.log_file:
                log_dir = os.path.dirname(self.log_file)
                if log_dir:
                    os.makedirs(log_dir, exist_ok=True)
                fh = logging.FileHandler(self.log_file)
                fh.setLevel(logging.DEBUG)
                fh.setFormatter(formatter)
                logger.addHandler(fh)

        self.logger = logger
        self.logger_name = logger_name
        self.log_level = log_level

    def get_logger(self):
        return self.logger
