"""Seeded random program generator for differential testing.

Every generated program is syntactically valid and statically clean, so it
can be run by the strict interpreter and by the rewrite-then-permissive
pipeline and the two observations compared.  Programs deliberately include
runtime pitfalls that the static pass cannot see:

* reads of `let` variables that never got a value (directly, or via the
  result of a function that returns nothing),
* strings/booleans flowing into arithmetic or ordering comparisons,
* non-boolean values used as conditions, and assignments in conditions,
* calls through aliases with the wrong argument count,
* unknown robot members (statically unknowable: only execution reaches them),
* ordering comparisons against function values.

With ``node_safe=True`` the program avoids the robot entirely and is also a
valid Node.js program with identical observable output, which the
differential oracle uses for byte-exact comparisons.

All randomness comes from one `random.Random(seed)`, so programs are
reproducible.  Names are globally unique, declarations always precede use,
loops are counter-bounded, and recursion is never generated, which keeps
every program terminating and free of static findings by construction.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

SENSES = (
    "getPosX",
    "getPosY",
    "getAngle",
    "getBallPosX",
    "getBallPosY",
    "getBallVelX",
    "getBallVelY",
)

MOTIONS = (
    ("moveForward", 0),
    ("turnLeft", 0),
    ("turnRight", 0),
    ("moveByXCells", 1),
    ("moveToXY", 2),
    ("turnTo", 1),
)


@dataclass
class GeneratedProgram:
    seed: int
    source: str
    uses_robot: bool
    sense_plan: dict[str, list[float]] = field(default_factory=dict)


class _Gen:
    def __init__(self, rng: random.Random, node_safe: bool):
        self.rng = rng
        self.node_safe = node_safe
        self.lines: list[str] = []
        self.indent = 0
        self.num_vars: list[str] = []
        self.str_vars: list[str] = []
        self.bool_vars: list[str] = []
        self.uninit_vars: list[str] = []
        # (name, arity, returns_value)
        self.funcs: list[tuple[str, int, bool]] = []
        self.aliases: list[tuple[str, int]] = []
        self.counter = 0
        self.used_robot = False
        self.in_function = False
        # Names of loop counters currently driving an open while loop.
        # Reassigning one could make the loop non-terminating, so writers
        # must skip them; reads stay allowed.
        self.protected: set[str] = set()

    # -- plumbing ------------------------------------------------------

    def fresh(self, prefix: str) -> str:
        self.counter += 1
        return f"{prefix}{self.counter}"

    def emit(self, text: str) -> None:
        pad = "  " * self.indent
        for line in text.split("\n"):
            self.lines.append(pad + line)

    def pick(self, seq):
        return seq[self.rng.randrange(len(seq))]

    def snapshot(self):
        return (
            len(self.num_vars),
            len(self.str_vars),
            len(self.bool_vars),
            len(self.uninit_vars),
            len(self.funcs),
            len(self.aliases),
        )

    def restore(self, snap) -> None:
        n, s, b, u, f, a = snap
        del self.num_vars[n:]
        del self.str_vars[s:]
        del self.bool_vars[b:]
        del self.uninit_vars[u:]
        del self.funcs[f:]
        del self.aliases[a:]

    # -- expressions ----------------------------------------------------

    def num_atom(self) -> str:
        roll = self.rng.random()
        if roll < 0.45 or not self.num_vars:
            kind = self.rng.randrange(4)
            if kind == 0:
                return str(self.rng.randint(0, 99))
            if kind == 1:
                return f"{self.rng.randint(0, 9)}.{self.rng.randint(1, 99)}"
            if kind == 2:
                return str(self.rng.randint(1, 9) * 100)
            return "0.5"
        if roll < 0.9 or self.node_safe or self.in_function:
            return self.pick(self.num_vars)
        self.used_robot = True
        return f"robot.{self.pick(SENSES)}()"

    def num_expr(self, depth: int = 0) -> str:
        if depth >= 2 or self.rng.random() < 0.4:
            return self.num_atom()
        op = self.pick(("+", "-", "*", "/", "%"))
        left = self.num_expr(depth + 1)
        right = self.num_expr(depth + 1)
        if self.rng.random() < 0.15:
            return f"-({left} {op} {right})"
        return f"({left} {op} {right})"

    def str_expr(self, depth: int = 0) -> str:
        words = ("go", "stop", "left", "right", "ok", "ball", "spin")
        atom = (
            self.pick(self.str_vars)
            if self.str_vars and self.rng.random() < 0.5
            else f'"{self.pick(words)}"'
        )
        if depth >= 2 or self.rng.random() < 0.6:
            return atom
        return f"({atom} + {self.str_expr(depth + 1)})"

    def bool_expr(self, depth: int = 0) -> str:
        roll = self.rng.random()
        if depth < 2 and roll < 0.2:
            return f"(!{self.bool_expr(depth + 1)})"
        if depth < 2 and roll < 0.35:
            op = self.pick(("&&", "||"))
            return f"({self.bool_expr(depth + 1)} {op} {self.bool_expr(depth + 1)})"
        if roll < 0.55 and self.bool_vars:
            return self.pick(self.bool_vars)
        if roll < 0.7:
            return self.pick(("true", "false"))
        if roll < 0.85:
            op = self.pick(("<", "<=", ">", ">="))
            return f"({self.num_atom()} {op} {self.num_atom()})"
        op = self.pick(("===", "!=="))
        return f"({self.num_atom()} {op} {self.num_atom()})"

    def any_expr(self) -> str:
        roll = self.rng.random()
        if roll < 0.5:
            return self.num_expr()
        if roll < 0.75:
            return self.str_expr()
        return self.bool_expr()

    # -- clean statements ------------------------------------------------

    def stmt_let_num(self) -> None:
        name = self.fresh("n")
        self.emit(f"let {name} = {self.num_expr()};")
        self.num_vars.append(name)

    def stmt_let_str(self) -> None:
        name = self.fresh("s")
        self.emit(f"let {name} = {self.str_expr()};")
        self.str_vars.append(name)

    def stmt_let_bool(self) -> None:
        name = self.fresh("b")
        self.emit(f"let {name} = {self.bool_expr()};")
        self.bool_vars.append(name)

    def stmt_assign(self) -> None:
        writable = [n for n in self.num_vars if n not in self.protected]
        if writable and self.rng.random() < 0.7:
            name = self.pick(writable)
            if self.rng.random() < 0.4:
                op = self.pick(("+=", "-=", "*="))
                self.emit(f"{name} {op} {self.num_expr()};")
            else:
                self.emit(f"{name} = {self.num_expr()};")
        elif self.str_vars:
            name = self.pick(self.str_vars)
            self.emit(f"{name} = {self.str_expr()};")
        else:
            self.stmt_let_num()

    def stmt_log(self) -> None:
        count = self.rng.randint(1, 3)
        args = ", ".join(self.any_expr() for _ in range(count))
        self.emit(f"console.log({args});")

    def stmt_if(self, budget: int) -> None:
        self.emit(f"if ({self.bool_expr()}) {{")
        self.indent += 1
        snap = self.snapshot()
        self.block(self.rng.randint(1, max(1, budget)))
        self.restore(snap)
        self.indent -= 1
        if self.rng.random() < 0.5:
            self.emit("} else {")
            self.indent += 1
            snap = self.snapshot()
            self.block(self.rng.randint(1, max(1, budget)))
            self.restore(snap)
            self.indent -= 1
        self.emit("}")

    def stmt_while(self, budget: int) -> None:
        counter = self.fresh("i")
        limit = self.rng.randint(1, 5)
        self.emit(f"let {counter} = 0;")
        self.num_vars.append(counter)
        self.protected.add(counter)
        self.emit(f"while ({counter} < {limit}) {{")
        self.indent += 1
        snap = self.snapshot()
        self.block(self.rng.randint(1, max(1, budget)))
        self.restore(snap)
        self.emit(f"{counter} = {counter} + 1;")
        self.indent -= 1
        self.emit("}")
        self.protected.discard(counter)

    def stmt_for(self, budget: int) -> None:
        counter = self.fresh("i")
        limit = self.rng.randint(1, 5)
        self.emit(f"for (let {counter} = 0; {counter} < {limit}; {counter} = {counter} + 1) {{")
        self.indent += 1
        snap = self.snapshot()
        self.block(self.rng.randint(1, max(1, budget)))
        self.restore(snap)
        self.indent -= 1
        self.emit("}")

    def stmt_func(self) -> None:
        name = self.fresh("f")
        arity = self.rng.randint(0, 3)
        params = [self.fresh("p") for _ in range(arity)]
        returns_value = self.rng.random() < 0.7
        self.emit(f"function {name}({', '.join(params)}) {{")
        self.indent += 1
        outer = (
            self.num_vars,
            self.str_vars,
            self.bool_vars,
            self.uninit_vars,
            self.in_function,
        )
        func_snap = (len(self.funcs), len(self.aliases))
        self.num_vars = list(params)
        self.str_vars = []
        self.bool_vars = []
        self.uninit_vars = []
        self.in_function = True
        for _ in range(self.rng.randint(0, 2)):
            self.simple_stmt()
        if returns_value:
            self.emit(f"return {self.num_expr()};")
        self.indent -= 1
        self.emit("}")
        (
            self.num_vars,
            self.str_vars,
            self.bool_vars,
            self.uninit_vars,
            self.in_function,
        ) = outer
        del self.funcs[func_snap[0]:]
        del self.aliases[func_snap[1]:]
        self.funcs.append((name, arity, returns_value))

    def stmt_call_func(self) -> None:
        if not self.funcs:
            self.stmt_func()
        name, arity, returns_value = self.pick(self.funcs)
        args = ", ".join(self.num_expr(depth=1) for _ in range(arity))
        if returns_value and self.rng.random() < 0.6:
            target = self.fresh("n")
            self.emit(f"let {target} = {name}({args});")
            self.num_vars.append(target)
        else:
            self.emit(f"{name}({args});")

    def stmt_motion(self) -> None:
        name, arity = self.pick(MOTIONS)
        args = ", ".join(self.num_atom() for _ in range(arity))
        self.emit(f"robot.{name}({args});")
        self.used_robot = True

    # -- pitfall statements ----------------------------------------------

    def poison_uninit(self) -> None:
        name = self.fresh("u")
        self.emit(f"let {name};")
        self.emit(f"console.log({name} + {self.rng.randint(1, 9)});")

    def poison_void_result(self) -> None:
        void_funcs = [f for f in self.funcs if not f[2]]
        if not void_funcs:
            name = self.fresh("f")
            self.emit(f"function {name}() {{ console.log(\"side\"); }}")
            self.funcs.append((name, 0, False))
            void_funcs = [(name, 0, False)]
        fname, arity, _ = self.pick(void_funcs)
        args = ", ".join(self.num_atom() for _ in range(arity))
        target = self.fresh("v")
        self.emit(f"let {target} = {fname}({args});")
        self.emit(f"console.log({target} * 2);")

    def poison_str_arith(self) -> None:
        expr = self.str_expr() if self.rng.random() < 0.5 else f'"{self.rng.randint(1, 9)}px"'
        op = self.pick(("-", "*", "/", "%"))
        self.emit(f"console.log({self.num_atom()} {op} ({expr} + \"\"));")

    def poison_str_compare(self) -> None:
        name = self.fresh("s")
        self.emit(f'let {name} = "{self.rng.randint(1, 20)}";')
        self.str_vars.append(name)
        op = self.pick(("<", "<=", ">", ">="))
        self.emit(f"if ({name} {op} {self.rng.randint(1, 20)}) {{")
        self.indent += 1
        self.emit('console.log("cmp");')
        self.indent -= 1
        self.emit("}")

    def poison_bool_arith(self) -> None:
        name = self.fresh("b")
        self.emit(f"let {name} = {self.bool_expr()};")
        self.bool_vars.append(name)
        self.emit(f"console.log({name} + {self.num_atom()});")

    def poison_mixed_add(self) -> None:
        if not self.str_vars:
            self.stmt_let_str()
        if not self.num_vars:
            self.stmt_let_num()
        self.emit(
            f"console.log(({self.pick(self.num_vars)} + {self.pick(self.str_vars)}) * 2);"
        )

    def poison_nonbool_cond(self) -> None:
        if not self.num_vars:
            self.stmt_let_num()
        self.emit(f"if ({self.pick(self.num_vars)}) {{")
        self.indent += 1
        self.emit('console.log("truthy");')
        self.indent -= 1
        self.emit("}")

    def poison_cond_assign(self) -> None:
        writable = [n for n in self.num_vars if n not in self.protected]
        if not writable:
            self.stmt_let_num()
            writable = [n for n in self.num_vars if n not in self.protected]
        name = self.pick(writable)
        self.emit(f"if ({name} = {self.rng.randint(0, 5)}) {{")
        self.indent += 1
        self.emit('console.log("assigned");')
        self.indent -= 1
        self.emit("}")

    def poison_alias_arity(self) -> None:
        if not self.funcs:
            self.stmt_func()
        fname, arity, _ = self.pick(self.funcs)
        alias = self.fresh("g")
        self.emit(f"let {alias} = {fname};")
        wrong = arity + 1 if self.rng.random() < 0.5 else arity + 2
        args = ", ".join(self.num_atom() for _ in range(wrong))
        self.emit(f"{alias}({args});")

    def poison_missing_member(self) -> None:
        name = self.pick(("wander", "jump", "speedUp", "getFuel"))
        if self.rng.random() < 0.5:
            self.emit(f"robot.{name}();")
        else:
            self.emit(f"console.log(robot.{name});")
        self.used_robot = True

    def poison_func_compared(self) -> None:
        if not self.funcs:
            self.stmt_func()
        fname = self.pick(self.funcs)[0]
        op = self.pick(("<", "<=", ">", ">="))
        self.emit(f"if ({fname} {op} {self.rng.randint(1, 9)}) {{")
        self.indent += 1
        self.emit('console.log("never");')
        self.indent -= 1
        self.emit("}")

    # -- assembly ---------------------------------------------------------

    def simple_stmt(self) -> None:
        roll = self.rng.random()
        if roll < 0.3:
            self.stmt_let_num()
        elif roll < 0.45:
            self.stmt_assign()
        elif roll < 0.7:
            self.stmt_log()
        elif roll < 0.8:
            self.stmt_let_str()
        else:
            self.stmt_let_bool()

    def block(self, budget: int) -> None:
        for _ in range(budget):
            roll = self.rng.random()
            if roll < 0.55:
                self.simple_stmt()
            elif roll < 0.7 and self.indent < 3:
                self.stmt_if(budget=1)
            elif roll < 0.8 and self.indent < 2:
                self.pick((self.stmt_while, self.stmt_for))(1)
            elif roll < 0.9:
                self.stmt_call_func()
            elif not self.node_safe and not self.in_function:
                self.stmt_motion()
            else:
                self.stmt_log()

    def poison(self) -> None:
        options = [
            self.poison_uninit,
            self.poison_void_result,
            self.poison_str_arith,
            self.poison_str_compare,
            self.poison_bool_arith,
            self.poison_mixed_add,
            self.poison_nonbool_cond,
            self.poison_cond_assign,
            self.poison_alias_arity,
            self.poison_func_compared,
        ]
        if not self.node_safe:
            options.append(self.poison_missing_member)
        self.pick(options)()


def generate_program(seed: int, node_safe: bool = False) -> GeneratedProgram:
    rng = random.Random(seed)
    gen = _Gen(rng, node_safe)

    for _ in range(rng.randint(0, 2)):
        gen.stmt_func()
    sections = rng.randint(2, 4)
    poisons = 0
    for _ in range(sections):
        gen.block(rng.randint(2, 5))
        if rng.random() < (0.28 if not node_safe else 0.45):
            gen.poison()
            poisons += 1
    gen.stmt_log()

    plan = {
        name: [round(rng.uniform(-1.5, 1.5), 2) for _ in range(40)] for name in SENSES
    }
    return GeneratedProgram(
        seed=seed,
        source="\n".join(gen.lines) + "\n",
        uses_robot=gen.used_robot,
        sense_plan=plan,
    )
