#include "justnets/corpus.hpp"

#include "justnets/net_io.hpp"

namespace justnets::corpus {

Net justness_a() {
  return parse_pnet(R"(net justness_a
place p tokens=1
place q tokens=1
trans ta label=a
trans tb label=b
arc p ta
arc q tb
arc tb q
)");
}

Net justness_b() {
  return parse_pnet(R"(net justness_b
place p tokens=1
trans ta label=a
trans tb label=b
arc p ta
arc p tb
arc tb p
)");
}

Net justness_c() {
  return parse_pnet(R"(net justness_c
place p tokens=1
place q
trans tt label=tau
trans tb label=b
arc p tt
arc tt q
arc q tb
)");
}

Net individual_tokens() {
  return parse_pnet(R"(net individual
place p tokens=2
place s tokens=1
trans ta label=a
trans tb label=b
arc p ta
arc s ta
arc ta p
arc ta s
arc p tb
)");
}

Net deadlock() { return parse_pnet("net deadlock\nplace p tokens=1\n"); }

Net livelock() {
  return parse_pnet("net livelock\nplace p tokens=1\ntrans tt label=tau\narc p tt\narc tt p\n");
}

Net success_now() { return parse_pnet("net success_now\nplace p tokens=1\ntrans tw label=w\narc p tw\n"); }

Net tau_then_success() {
  return parse_pnet(R"(net tau_w
place p tokens=1
place e
trans tt label=tau
trans tw label=w
arc p tt
arc tt e
arc e tw
)");
}

Net branching_n() {
  return parse_pnet(R"(net branching_n
place p0 tokens=1
place p1
trans ta label=a
trans tb label=b
trans tc label=c
arc p0 ta
arc ta p1
arc p1 tb
arc p1 tc
)");
}

Net branching_n2() {
  return parse_pnet(R"(net branching_n2
place p2 tokens=1
place p3
place p4
trans ta1 label=a
trans ta2 label=a
trans tb label=b
trans tc label=c
arc p2 ta1
arc ta1 p3
arc p2 ta2
arc ta2 p4
arc p3 tb
arc p4 tc
)");
}

Net branching_test() {
  return parse_pnet(R"(net branching_test
place q0 tokens=1
place q1
trans ta label=a
trans tc label=c
arc q0 ta
arc ta q1
arc q1 tc
)");
}

Net abstraction_n() {
  return parse_pnet(R"(net abstraction_n
place p0 tokens=1
place p1
place p2
trans tt label=tau
trans tb label=b
trans tc label=c
arc p0 tt
arc tt p1
arc p1 tb
arc tb p2
arc p2 tc
)");
}

Net abstraction_n2() {
  return parse_pnet(R"(net abstraction_n2
place p0 tokens=1
place p1
place p2
trans t0 label=tau
trans tt label=tau
trans tb label=b
trans tc label=c
arc p0 t0
arc p0 tt
arc tt p1
arc p1 tb
arc tb p2
arc p2 tc
)");
}

Net a_then_stop() { return parse_pnet("net a0\nplace p tokens=1\nplace q\ntrans ta label=a\narc p ta\narc ta q\n"); }

Net tau_a_then_stop() {
  return parse_pnet(R"(net tau_a0
place p tokens=1
place q
place r
trans tt label=tau
trans ta label=a
arc p tt
arc tt q
arc q ta
arc ta r
)");
}

Net choice_a_livelock() {
  return parse_pnet(R"(net a_or_livelock
place p tokens=1
trans ta label=a
trans tt label=tau
arc p ta
arc p tt
arc tt p
)");
}

Net choice_b_livelock() {
  return parse_pnet(R"(net b_or_livelock
place p tokens=1
trans tb label=b
trans tt label=tau
arc p tb
arc p tt
arc tt p
)");
}

Net loops_apart() {
  return parse_pnet(R"(net loops_apart
place p tokens=1
place q tokens=1
trans ta label=a
trans tt label=tau
arc p ta
arc ta p
arc q tt
arc tt q
)");
}

Net loops_together() {
  return parse_pnet(R"(net loops_together
place p tokens=1
trans ta label=a
trans tt label=tau
arc p ta
arc ta p
arc p tt
arc tt p
)");
}

Net loops_together_escape() {
  return parse_pnet(R"(net loops_escape
place p tokens=1
place q
trans ta label=a
trans tt label=tau
trans te label=tau
trans tq label=tau
arc p ta
arc ta p
arc p tt
arc tt p
arc p te
arc te q
arc q tq
arc tq q
)");
}

Net cg_choice_livelock() {
  return parse_pnet(R"(net cg_choice
place p9 tokens=1
place p10
trans tc1 label=c
trans tc2 label=c
trans tg label=g
trans tt label=tau
arc p9 tc1
arc p9 tc2
arc tc2 p10
arc p10 tg
arc p9 tt
arc tt p9
)");
}

Net cg_livelock() {
  return parse_pnet(R"(net cg
place p11 tokens=1
place p12
trans tc label=c
trans tg label=g
trans tt label=tau
arc p11 tc
arc tc p12
arc p12 tg
arc p11 tt
arc tt p11
)");
}

Net timed_test_aw() {
  return parse_pnet(R"(net test_aw
place c0 tokens=1
place c1
trans ta label=a
trans tw label=w
arc c0 ta
arc ta c1
arc c1 tw
)");
}

std::string traffic_source() {
  return R"(TL = tr.tg.(drive > ty.TL);
Traffic = drive.drive.0;
TL |[drive]| Traffic
)";
}

std::vector<NamedNet> example_nets() {
  return {
      {"justness_a", justness_a()},
      {"justness_b", justness_b()},
      {"justness_c", justness_c()},
      {"individual", individual_tokens()},
      {"deadlock", deadlock()},
      {"livelock", livelock()},
      {"branching_n", branching_n()},
      {"branching_n2", branching_n2()},
      {"abstraction_n", abstraction_n()},
      {"abstraction_n2", abstraction_n2()},
      {"a0", a_then_stop()},
      {"tau_a0", tau_a_then_stop()},
      {"a_or_livelock", choice_a_livelock()},
      {"b_or_livelock", choice_b_livelock()},
      {"loops_apart", loops_apart()},
      {"loops_together", loops_together()},
      {"loops_escape", loops_together_escape()},
      {"cg_choice", cg_choice_livelock()},
      {"cg", cg_livelock()},
  };
}

}  // namespace justnets::corpus
