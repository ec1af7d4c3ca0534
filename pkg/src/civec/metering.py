"""Hardware measurement plumbing.

Counters come from perf_event_open (instructions, cycles, L1d loads, LLC
loads) and package energy from the powercap sysfs counter. Either source
can be absent (permissions, virtualization, non-Intel hardware); a
missing metric is reported as None, never as 0. Tests and offline
analysis inject scripted providers instead of the real ones.

Energy counters wrap at max_energy_range_uj; deltas are corrected for at
most one wrap, which holds for any measurement far shorter than the
range (hours at desktop power draws).
"""

import ctypes
import os
import statistics
import struct
import time
from dataclasses import dataclass

AUTO = object()

# perf_event_attr constants
_PERF_TYPE_HARDWARE = 0
_PERF_TYPE_HW_CACHE = 3
_PERF_COUNT_HW_CPU_CYCLES = 0
_PERF_COUNT_HW_INSTRUCTIONS = 1
_CACHE_L1D = 0
_CACHE_LL = 2
_CACHE_OP_READ = 0
_CACHE_RESULT_ACCESS = 0
_ATTR_SIZE = 112
_FLAG_DISABLED = 1 << 0
_FLAG_EXCLUDE_KERNEL = 1 << 5
_FLAG_EXCLUDE_HV = 1 << 6
_IOC_ENABLE = 0x2400
_IOC_DISABLE = 0x2401
_IOC_RESET = 0x2403

EVENTS = (
    ("instructions", _PERF_TYPE_HARDWARE, _PERF_COUNT_HW_INSTRUCTIONS),
    ("cycles", _PERF_TYPE_HARDWARE, _PERF_COUNT_HW_CPU_CYCLES),
    ("l1d_loads", _PERF_TYPE_HW_CACHE,
     _CACHE_L1D | (_CACHE_OP_READ << 8) | (_CACHE_RESULT_ACCESS << 16)),
    ("llc_loads", _PERF_TYPE_HW_CACHE,
     _CACHE_LL | (_CACHE_OP_READ << 8) | (_CACHE_RESULT_ACCESS << 16)),
)

METRIC_NAMES = tuple(name for name, _, _ in EVENTS)


def _syscall_nr():
    import platform
    machine = platform.machine()
    if machine == "x86_64":
        return 298
    if machine in ("aarch64", "arm64"):
        return 241
    return None


class PerfCounters:
    """One fd per event; events that fail to open are simply absent."""

    def __init__(self):
        self._fds = {}
        nr = _syscall_nr()
        if nr is None:
            return
        try:
            libc = ctypes.CDLL(None, use_errno=True)
        except OSError:
            return
        for name, etype, config in EVENTS:
            attr = bytearray(_ATTR_SIZE)
            struct.pack_into("<IIQ", attr, 0, etype, _ATTR_SIZE, config)
            struct.pack_into("<Q", attr, 40,
                             _FLAG_DISABLED | _FLAG_EXCLUDE_KERNEL
                             | _FLAG_EXCLUDE_HV)
            buf = (ctypes.c_char * _ATTR_SIZE).from_buffer(attr)
            fd = libc.syscall(nr, buf, 0, -1, -1, 0)
            if fd >= 0:
                self._fds[name] = fd

    @property
    def available(self):
        return tuple(self._fds)

    def start(self):
        import fcntl
        for fd in self._fds.values():
            fcntl.ioctl(fd, _IOC_RESET, 0)
            fcntl.ioctl(fd, _IOC_ENABLE, 0)

    def stop(self):
        import fcntl
        out = {}
        for name, fd in self._fds.items():
            fcntl.ioctl(fd, _IOC_DISABLE, 0)
            out[name] = int.from_bytes(os.read(fd, 8), "little")
        for name in METRIC_NAMES:
            out.setdefault(name, None)
        return out

    def close(self):
        for fd in self._fds.values():
            os.close(fd)
        self._fds = {}

    def __del__(self):
        try:
            self.close()
        except Exception:
            pass


class ScriptedCounters:
    """Test double: pops one reading dict per start/stop pair."""

    def __init__(self, readings):
        self._readings = list(readings)
        self._i = 0

    @property
    def available(self):
        return METRIC_NAMES

    def start(self):
        pass

    def stop(self):
        r = dict(self._readings[self._i])
        self._i += 1
        for name in METRIC_NAMES:
            r.setdefault(name, None)
        return r

    def close(self):
        pass


class PowercapEnergy:
    """Reads the package energy counter in microjoules."""

    def __init__(self, path=None):
        self.path = path or self._discover()
        self.max_range = None
        if self.path:
            try:
                with open(os.path.join(self.path, "max_energy_range_uj")) as f:
                    self.max_range = int(f.read().strip())
            except OSError:
                self.max_range = (1 << 32) - 1

    @staticmethod
    def _discover():
        env = os.environ.get("CIVEC_ENERGY_PATH")
        if env:
            return env if os.path.exists(os.path.join(env, "energy_uj")) else None
        base = "/sys/class/powercap"
        try:
            entries = sorted(os.listdir(base))
        except OSError:
            return None
        for e in entries:
            d = os.path.join(base, e)
            try:
                with open(os.path.join(d, "name")) as f:
                    if f.read().strip().startswith("package"):
                        return d
            except OSError:
                continue
        return None

    @property
    def available(self):
        return self.path is not None

    def read_uj(self):
        with open(os.path.join(self.path, "energy_uj")) as f:
            return int(f.read().strip())

    def delta_uj(self, before, after):
        d = after - before
        if d < 0:
            d += self.max_range + 1
        return d


class ScriptedEnergy:
    """Test double: successive read_uj() values from a list."""

    def __init__(self, readings, max_range=(1 << 32) - 1):
        self._readings = list(readings)
        self._i = 0
        self.max_range = max_range

    @property
    def available(self):
        return True

    def read_uj(self):
        v = self._readings[self._i]
        self._i += 1
        return v

    def delta_uj(self, before, after):
        d = after - before
        if d < 0:
            d += self.max_range + 1
        return d


@dataclass(frozen=True)
class MetricsRecord:
    reps: int
    time_ns: int
    energy_pkg_uj: object = None      # int | float | None
    instructions: object = None
    cycles: object = None
    l1d_loads: object = None
    llc_loads: object = None

    def as_dict(self):
        return {
            "time_ns": self.time_ns,
            "energy_pkg_uj": self.energy_pkg_uj,
            "instructions": self.instructions,
            "cycles": self.cycles,
            "l1d_loads": self.l1d_loads,
            "llc_loads": self.llc_loads,
        }


def pin_to_core(core):
    previous = os.sched_getaffinity(0)
    os.sched_setaffinity(0, {core})
    return previous


def measure(work, reps=10, counters=AUTO, energy=AUTO, pin_core=None):
    """Run ``work()`` reps times; report the per-metric median.

    Medians follow statistics.median: even rep counts can yield a
    half-integral value. Counter or energy providers may be injected;
    AUTO uses the hardware, None disables the source.
    """
    if reps < 1:
        raise ValueError("reps must be >= 1")
    if counters is AUTO:
        counters = PerfCounters()
    if energy is AUTO:
        energy = PowercapEnergy()
    restore = None
    if pin_core is not None:
        restore = pin_to_core(pin_core)
    try:
        times = []
        energies = []
        counts = {name: [] for name in METRIC_NAMES}
        for _ in range(reps):
            e0 = energy.read_uj() if energy is not None and energy.available \
                else None
            if counters is not None:
                counters.start()
            t0 = time.perf_counter_ns()
            work()
            t1 = time.perf_counter_ns()
            vals = counters.stop() if counters is not None else {}
            if e0 is not None:
                energies.append(energy.delta_uj(e0, energy.read_uj()))
            times.append(t1 - t0)
            for name in METRIC_NAMES:
                v = vals.get(name)
                if v is not None:
                    counts[name].append(v)
    finally:
        if restore is not None:
            os.sched_setaffinity(0, restore)

    def med(xs, want):
        if len(xs) != want:
            return None
        m = statistics.median(xs)
        return int(m) if float(m).is_integer() else m

    return MetricsRecord(
        reps=reps,
        time_ns=int(statistics.median(times)),
        energy_pkg_uj=med(energies, reps),
        instructions=med(counts["instructions"], reps),
        cycles=med(counts["cycles"], reps),
        l1d_loads=med(counts["l1d_loads"], reps),
        llc_loads=med(counts["llc_loads"], reps),
    )
