# distutils: language = c++
"""Compiled habit-table kernel.

Operation-for-operation mirror of `pyhabits.HabitStore`. The arithmetic
expressions are transcribed verbatim and the extension is compiled with
-ffp-contract=off, so both backends produce bit-identical doubles.
"""

from cython.operator cimport dereference as deref
from libc.math cimport isnan
from libcpp.unordered_map cimport unordered_map
from libcpp.unordered_set cimport unordered_set
from libcpp.vector cimport vector

ctypedef long long i64


cdef inline i64 _key(i64 a, i64 e) noexcept:
    return (a << 32) | e


cdef class HabitStore:
    cdef unordered_map[i64, Py_ssize_t] _slot
    cdef vector[i64] _ka  # slot -> activity, creation order
    cdef vector[i64] _ke  # slot -> element
    cdef vector[double] _s
    cdef vector[double] _p
    cdef vector[double] _c
    cdef vector[Py_ssize_t] _chain_data
    cdef vector[Py_ssize_t] _chain_start

    backend = "cython"

    def __init__(self, chain_data, chain_start):
        for v in chain_data:
            self._chain_data.push_back(v)
        for v in chain_start:
            self._chain_start.push_back(v)

    def __len__(self):
        return <Py_ssize_t> self._ka.size()

    cdef Py_ssize_t _ensure(self, i64 a, i64 e):
        cdef i64 k = _key(a, e)
        cdef unordered_map[i64, Py_ssize_t].iterator it = self._slot.find(k)
        cdef Py_ssize_t i
        if it != self._slot.end():
            return deref(it).second
        i = <Py_ssize_t> self._ka.size()
        self._slot[k] = i
        self._ka.push_back(a)
        self._ke.push_back(e)
        self._s.push_back(0.0)
        self._p.push_back(0.0)
        self._c.push_back(0.0)
        return i

    def has(self, a, e):
        return self._slot.count(_key(<i64> a, <i64> e)) > 0

    def set_views(self, a, e, double strength, double personal, double collective):
        cdef Py_ssize_t i = self._ensure(<i64> a, <i64> e)
        self._s[i] = strength
        self._p[i] = personal
        self._c[i] = collective

    def get_views(self, a, e):
        cdef unordered_map[i64, Py_ssize_t].iterator it = self._slot.find(
            _key(<i64> a, <i64> e))
        if it == self._slot.end():
            return (0.0, 0.0, 0.0)
        cdef Py_ssize_t i = deref(it).second
        return (self._s[i], self._p[i], self._c[i])

    def project_collective(self):
        cdef Py_ssize_t i
        for i in range(<Py_ssize_t> self._ka.size()):
            if isnan(self._c[i]):
                self._c[i] = self._p[i]

    cdef double _effective(self, i64 a, Py_ssize_t element, double attenuation):
        cdef double factor = 1.0
        cdef double v
        cdef Py_ssize_t j
        cdef unordered_map[i64, Py_ssize_t].iterator it
        for j in range(self._chain_start[element], self._chain_start[element + 1]):
            it = self._slot.find(_key(a, <i64> self._chain_data[j]))
            if it != self._slot.end():
                v = self._s[deref(it).second]
                if v > 0.0:
                    return factor * v
            factor = factor * attenuation
        return 0.0

    def pressures(self, activities, ctx_elements, double attenuation, int aggregation):
        cdef vector[Py_ssize_t] ctx
        for e in ctx_elements:
            ctx.push_back(e)
        cdef Py_ssize_t n = <Py_ssize_t> ctx.size()
        cdef list out = []
        cdef double acc, v
        cdef Py_ssize_t j
        cdef i64 a
        for act in activities:
            a = <i64> act
            acc = 0.0
            if aggregation == 1:  # max
                for j in range(n):
                    v = self._effective(a, ctx[j], attenuation)
                    if v > acc:
                        acc = v
            else:
                for j in range(n):
                    acc = acc + self._effective(a, ctx[j], attenuation)
                if aggregation == 0:  # mean
                    acc = acc / n
            out.append(acc)
        return out

    def reinforce(self, activity, ctx_elements, double rate):
        cdef i64 a = <i64> activity
        cdef Py_ssize_t i
        cdef double s
        for e in ctx_elements:
            i = self._ensure(a, <i64> e)
            s = self._s[i]
            self._s[i] = s + rate * (1.0 - s)

    def decay(self, performed, ctx_elements, double rate):
        # Default mode: pairs reinforced this tick keep their value.
        cdef i64 p = <i64> performed
        cdef unordered_set[i64] skip
        for e in ctx_elements:
            skip.insert(<i64> e)
        cdef Py_ssize_t i
        for i in range(<Py_ssize_t> self._ka.size()):
            if self._ka[i] == p and skip.count(self._ke[i]) > 0:
                continue
            self._s[i] = (1.0 - rate) * self._s[i]

    def habit_tick(self, performed, ctx_elements, double rate, double decay_rate,
                   bint decay_all):
        # One-step update from tick-start values. Reinforced pairs get
        # h + r(1-h), or (1-d)h + r(1-h) when decay applies to all;
        # every other pair gets (1-d)h.
        cdef i64 p = <i64> performed
        cdef unordered_set[i64] member
        for e in ctx_elements:
            self._ensure(p, <i64> e)
            member.insert(<i64> e)
        cdef Py_ssize_t i
        cdef double s
        for i in range(<Py_ssize_t> self._ka.size()):
            s = self._s[i]
            if self._ka[i] == p and member.count(self._ke[i]) > 0:
                if decay_all:
                    self._s[i] = (1.0 - decay_rate) * s + rate * (1.0 - s)
                else:
                    self._s[i] = s + rate * (1.0 - s)
            else:
                self._s[i] = (1.0 - decay_rate) * s

    def track_personal(self, double awareness):
        cdef Py_ssize_t i
        cdef double p
        for i in range(<Py_ssize_t> self._ka.size()):
            p = self._p[i]
            self._p[i] = p + awareness * (self._s[i] - p)

    def observe(self, acted, competing, ctx_elements, double rate):
        cdef i64 act = <i64> acted
        cdef vector[i64] comp
        for a in competing:
            comp.push_back(<i64> a)
        cdef Py_ssize_t i, j, m
        cdef i64 e64
        cdef double c
        cdef unordered_map[i64, Py_ssize_t].iterator it
        for e in ctx_elements:
            e64 = <i64> e
            i = self._ensure(act, e64)
            c = self._c[i]
            self._c[i] = c + rate * (1.0 - c)
            for m in range(<Py_ssize_t> comp.size()):
                it = self._slot.find(_key(comp[m], e64))
                if it != self._slot.end():
                    j = deref(it).second
                    self._c[j] = (1.0 - rate) * self._c[j]

    def sums(self):
        cdef Py_ssize_t n = <Py_ssize_t> self._ka.size()
        cdef double ts = 0.0
        cdef double tp = 0.0
        cdef double tc = 0.0
        cdef Py_ssize_t i
        for i in range(n):
            ts = ts + self._s[i]
            tp = tp + self._p[i]
            tc = tc + self._c[i]
        return (n, ts, tp, tc)

    def items(self):
        cdef list out = []
        cdef Py_ssize_t i
        for i in range(<Py_ssize_t> self._ka.size()):
            out.append((self._ka[i], self._ke[i], self._s[i], self._p[i], self._c[i]))
        return out
