#include "depcore/oracles.hpp"

namespace depcore {

const std::vector<CorpusProgram>& termination_corpus() {
  static const std::vector<CorpusProgram> corpus = {
      {"countdown", R"(
let cell = new(null);
let _ = cell["count"] = fun(n){ if (n < 1) { 0 } else { cell["count"](n - 1) } };
cell["count"](10)
)"},
      {"accumulate", R"(
let cell = new(null);
let _ = cell["sum"] = fun(n){ if (n < 1) { 0 } else { n + cell["sum"](n - 1) } };
cell["sum"](trace(5))
)"},
      {"infinite-self-call", R"(
let cell = new(null);
let _ = cell["loop"] = fun(n){ cell["loop"](n + 1) };
cell["loop"](0)
)"},
      {"omega", R"(
fun(x){ x(x) }(fun(x){ x(x) })
)"},
      {"even-odd", R"(
let fns = new(null);
let _ = fns["even"] = fun(n){ if (n == 0) { true } else { fns["odd"](n - 1) } };
let _ = fns["odd"] = fun(n){ if (n == 0) { false } else { fns["even"](n - 1) } };
fns["even"](7)
)"},
      {"ping-pong", R"(
let fns = new(null);
let _ = fns["ping"] = fun(n){ fns["pong"](n + 1) };
let _ = fns["pong"] = fun(n){ fns["ping"](n * 2) };
fns["ping"](1)
)"},
      {"list-builder", R"(
let cell = new(null);
let _ = cell["build"] = fun(n){
  if (n < 1) { null } else {
    let node = new(null);
    let _ = node["head"] = n;
    let _ = node["next"] = cell["build"](n - 1);
    node
  }
};
cell["build"](5)["head"]
)"},
      {"chain-walk", R"(
let a = new(null);
let b = new(null);
let c = new(null);
let _ = a["next"] = b;
let _ = b["next"] = c;
let _ = c["next"] = null;
let _ = c["val"] = trace(1, "T", "deep");
let walk = new(null);
let _ = walk["f"] = fun(o){ if (o["next"] == null) { o["val"] } else { walk["f"](o["next"]) } };
walk["f"](a)
)"},
      {"string-growth", R"(
let cell = new(null);
let _ = cell["grow"] = fun(s){ if (s == "aaaa") { s } else { cell["grow"](s + "a") } };
cell["grow"]("")
)"},
      {"key-growth", R"(
let obj = new(null);
let cell = new(null);
let _ = cell["fill"] = fun(k){
  if (k == "kkkk") { 0 } else { let _ = obj[k] = k; cell["fill"](k + "k") }
};
cell["fill"]("k")
)"},
      {"curried-add", R"(
let add = fun(a){ fun(b){ a + b } };
let cell = new(null);
let _ = cell["sum"] = fun(n){ if (n < 1) { 0 } else { add(n)(cell["sum"](n - 1)) } };
cell["sum"](4)
)"},
      {"traced-recursion", R"(
let cell = new(null);
let _ = cell["f"] = fun(n){
  if (n < 1) { trace(n, "T", "base") } else { cell["f"](trace(n - 1, "T", "step")) }
};
cell["f"](3)
)"},
      {"prototype-method", R"(
let proto = new(null);
let obj = new(proto);
let _ = proto["down"] = fun(n){ if (n < 1) { 0 } else { obj["down"](n - 1) + 1 } };
obj["down"](3)
)"},
      {"closure-factory", R"(
let cell = new(null);
let make = fun(k){ fun(x){ x + k } };
let _ = cell["iter"] = fun(n){
  if (n < 1) { make(0) } else { let f = cell["iter"](n - 1); make(f(n)) }
};
cell["iter"](3)(1)
)"},
      {"ackermann", R"(
let cell = new(null);
let _ = cell["ack"] = fun(m){ fun(n){
  if (m == 0) { n + 1 } else {
    if (n == 0) { cell["ack"](m - 1)(1) } else { cell["ack"](m - 1)(cell["ack"](m)(n - 1)) }
  }
} };
cell["ack"](2)(2)
)"},
      {"fibonacci", R"(
let cell = new(null);
let _ = cell["fib"] = fun(n){ if (n < 2) { n } else { cell["fib"](n - 1) + cell["fib"](n - 2) } };
cell["fib"](10)
)"},
      {"proto-chain-growth", R"(
let cell = new(null);
let _ = cell["chain"] = fun(p){ cell["chain"](new(p)) };
cell["chain"](null)
)"},
      {"fixpoint-combinator", R"(
let y = fun(f){
  let c = new(null);
  let _ = c["g"] = fun(x){ f(c["g"])(x) };
  c["g"]
};
let fact = y(fun(self){ fun(n){ if (n < 1) { 1 } else { n * self(n - 1) } } });
fact(5)
)"},
      {"untrace-recursion", R"(
let cell = new(null);
let _ = cell["clean"] = fun(n){
  if (n < 1) { untrace(trace(n, "T", "#DOM"), "T"->"S", "#DOM") }
  else { untrace(cell["clean"](n - 1), "T"->"S", "#DOM") }
};
cell["clean"](trace(3, "T", "#DOM"))
)"},
      {"counter", R"(
let counter = new(null);
let _ = counter["n"] = 0;
let loop = new(null);
let _ = loop["tick"] = fun(k){
  if (counter["n"] < 10) {
    let _ = counter["n"] = counter["n"] + k;
    loop["tick"](k)
  } else { counter["n"] }
};
loop["tick"](1)
)"},
  };
  return corpus;
}

}  // namespace depcore
