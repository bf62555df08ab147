import logging

from src.utils.log_utils import init_loggers


def test_init_loggers_is_idempotent(tmp_path):
    root = logging.getLogger()
    console = logging.getLogger('console')
    before_root, before_console = list(root.handlers), list(console.handlers)
    log_path = tmp_path / 'run.log'
    try:
        init_loggers(str(log_path))
        init_loggers(str(log_path))
        added = [h for h in root.handlers if h not in before_root]
        assert len([h for h in added if isinstance(h, logging.FileHandler)]) <= 1
        assert len(console.handlers) == max(1, len(before_console))

        logging.getLogger('src.test').info('hello')
        for handler in added:
            handler.flush()
        if added:
            assert 'src.test - INFO - hello' in log_path.read_text()
    finally:
        for handler in root.handlers[:]:
            if handler not in before_root:
                root.removeHandler(handler)
                handler.close()
        for handler in console.handlers[:]:
            if handler not in before_console:
                console.removeHandler(handler)
