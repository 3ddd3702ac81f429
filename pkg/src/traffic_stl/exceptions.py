"""Exception hierarchy shared by all subpackages."""


class TrafficSTLError(Exception):
    """Base class for every error raised by traffic_stl."""


class ParameterError(TrafficSTLError, ValueError):
    pass


class DomainError(TrafficSTLError, ValueError):
    """A time argument falls outside a signal's sampled interval."""

    def __init__(self, t, interval):
        self.t = t
        self.interval = tuple(interval)
        super().__init__(
            f"t={t!r} outside valid interval [{self.interval[0]!r}, {self.interval[1]!r}]"
        )


class InsufficientDataError(TrafficSTLError, ValueError):
    pass


class ParseError(TrafficSTLError, ValueError):
    """Lexical or syntax error in formula text; ``position`` is 1-based."""

    def __init__(self, message, position, text=None):
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}")


class MissingChannelError(TrafficSTLError, KeyError):
    def __init__(self, channel, available=()):
        self.channel = channel
        self.available = tuple(sorted(available))
        super().__init__(channel)

    def __str__(self):
        return f"trace has no channel {self.channel!r} (available: {', '.join(self.available) or 'none'})"


class HorizonError(TrafficSTLError, ValueError):
    pass


class CollisionError(TrafficSTLError, RuntimeError):
    """Two vehicles on the same lane reached a non-positive gap."""

    def __init__(self, gap, time=None, follower_id=None, leader_id=None):
        self.gap = gap
        self.time = time
        self.follower_id = follower_id
        self.leader_id = leader_id
        msg = f"non-positive gap {gap:.4f} m"
        if follower_id is not None:
            msg = f"{follower_id} behind {leader_id}: {msg}"
        if time is not None:
            msg = f"collision at t={time:.3f}s: {msg}"
        super().__init__(msg)


class EmptyPopulationError(TrafficSTLError, ValueError):
    pass


class ConfigError(TrafficSTLError, ValueError):
    def __init__(self, message, line=None, path=None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}".strip())


class SchemaError(TrafficSTLError, ValueError):
    """A trajectory or verdict file does not match the expected CSV layout."""

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        loc = f"{path}" if path is not None else "<input>"
        if line is not None:
            loc += f":{line}"
        super().__init__(f"{loc}: {message}")
