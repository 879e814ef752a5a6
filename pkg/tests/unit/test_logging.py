"""Tests for facloc._logging module."""

import logging

from facloc._logging import disable_logging, get_logger, setup_basic_logging


class TestGetLogger:

    def test_returns_logger(self):
        logger = get_logger("test")
        assert isinstance(logger, logging.Logger)

    def test_prefixes_name(self):
        logger = get_logger("mymodule")
        assert logger.name == "facloc.mymodule"

    def test_already_prefixed(self):
        logger = get_logger("facloc.optimal")
        assert logger.name == "facloc.optimal"

    def test_main_becomes_facloc(self):
        logger = get_logger("__main__")
        assert logger.name == "facloc"


class TestSetupBasicLogging:

    def test_sets_level(self):
        setup_basic_logging(level=logging.DEBUG)
        logger = logging.getLogger("facloc")
        assert logger.level == logging.DEBUG

    def test_adds_handler(self):
        logger = logging.getLogger("facloc")
        logger.handlers.clear()

        setup_basic_logging()

        assert len(logger.handlers) >= 1

    def test_no_duplicate_handlers(self):
        logger = logging.getLogger("facloc")
        logger.handlers.clear()

        setup_basic_logging()
        setup_basic_logging()

        assert len(logger.handlers) == 1

    def test_relevels_existing_handler(self):
        logger = logging.getLogger("facloc")
        logger.handlers.clear()

        setup_basic_logging(level=logging.WARNING)
        setup_basic_logging(level=logging.DEBUG)

        assert logger.handlers[0].level == logging.DEBUG

    def test_does_not_propagate(self):
        setup_basic_logging()
        assert logging.getLogger("facloc").propagate is False


class TestDisableLogging:

    def test_disables_all(self):
        disable_logging()
        logger = logging.getLogger("facloc")
        assert logger.level > logging.CRITICAL
