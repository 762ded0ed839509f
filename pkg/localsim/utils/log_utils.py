"""
This file contains utility classes and functions for logging to stdout and stderr
Adapted from robosuite's log_utils
"""
import logging
import os
import time

from termcolor import colored

import localsim.macros as macros

LEVEL_COLORS = {
    logging.DEBUG: "green",
    logging.INFO: "green",
    logging.WARNING: "yellow",
    logging.ERROR: "red",
    logging.CRITICAL: "red",
}

FORMAT_STR = {
    "file": "[localsim %(levelname)s - %(asctime)s] ",
    "console": "[localsim %(levelname)s] ",
}

MESSAGE_STR = "%(message)s (%(filename)s:%(lineno)d)"


class FileFormatter(logging.Formatter):
    """
    File formatter, no colors
    """

    def format(self, record):
        formatter = logging.Formatter(FORMAT_STR["file"] + MESSAGE_STR)
        return formatter.format(record)


class ConsoleFormatter(logging.Formatter):
    """
    Console formatter, header colored by level
    """

    def format(self, record):
        color = LEVEL_COLORS.get(record.levelno)
        log_fmt = colored(FORMAT_STR["console"], color, attrs=["bold"]) + MESSAGE_STR
        formatter = logging.Formatter(log_fmt)
        return formatter.format(record)


class DefaultLogger:
    """
    Default logger class for localsim.

    Args:
        logger_name (str): name of the underlying logging.Logger

        console_logging_level (str or None): level for the console handler, None disables it

        file_logging_level (str or None): level for the file handler, None disables it
    """

    def __init__(
        self,
        logger_name="localsim_logs",
        console_logging_level="INFO",
        file_logging_level=None,
    ):
        self.logger_name = logger_name
        logger = logging.getLogger(self.logger_name)
        # avoid stacking handlers when the module is reloaded
        if logger.handlers:
            self.logger = logger
            return

        if file_logging_level is not None:
            time_str = str(time.time()).replace(".", "_")
            log_file_path = "/tmp/localsim_{}_{}.log".format(time_str, os.getpid())
            fh = logging.FileHandler(log_file_path)
            print(colored("[localsim]: Saving logs to {}".format(log_file_path), "yellow"))
            fh.setLevel(logging.getLevelName(file_logging_level))
            fh.setFormatter(FileFormatter())
            logger.addHandler(fh)

        if console_logging_level is not None:
            ch = logging.StreamHandler()
            ch.setLevel(logging.getLevelName(console_logging_level))
            ch.setFormatter(ConsoleFormatter())
            logger.addHandler(ch)

        logger.setLevel(logging.DEBUG)
        logger.propagate = False
        self.logger = logger

    def get_logger(self):
        return self.logger


LOCALSIM_DEFAULT_LOGGER = DefaultLogger(
    console_logging_level=macros.CONSOLE_LOGGING_LEVEL,
    file_logging_level=macros.FILE_LOGGING_LEVEL,
).get_logger()
