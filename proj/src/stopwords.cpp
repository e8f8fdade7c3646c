#include <sstream>
#include <string>

#include "storychart/corpus.hpp"
#include "storychart/unicode.hpp"

namespace storychart::corpus {

namespace {

// Portuguese function words; forms are already lowercase NFC.
constexpr std::string_view kPortugueseStopwords = R"(
a à ao aos aquela aquelas aquele aqueles aquilo as às até
com como contra
da das de dela delas dele deles depois do dos
e é ela elas ele eles em entre era eram éramos essa essas esse esses esta está
estamos estão estar estas estava estavam estávamos este esteja estejam estejamos
estes esteve estive estivemos estiver estivera estiveram estivéramos estiverem
estivermos estivesse estivessem estivéssemos estou eu
foi fomos for fora foram fôramos forem formos fosse fossem fôssemos fui
há haja hajam hajamos hão havemos haver hei houve houvemos houver houvera
houverá houveram houvéramos houverão houverei houverem houveremos houveria
houveriam houveríamos houvermos houvesse houvessem houvéssemos
isso isto já lhe lhes mais mas me mesmo meu meus minha minhas muito
na não nas nem no nos nós nossa nossas nosso nossos num numa
o os ou para pela pelas pelo pelos por qual quando que quem
são se seja sejam sejamos sem ser será serão serei seremos seria seriam
seríamos seu seus só somos sou sua suas
também te tem tém temos tenha tenham tenhamos tenho terá terão terei teremos
teria teriam teríamos teu teus teve tinha tinham tínhamos tive tivemos tiver
tivera tiveram tivéramos tiverem tivermos tivesse tivessem tivéssemos tu tua tuas
um uma umas uns você vocês vos
)";

}  // namespace

StopwordSet bundled_stopwords() {
  StopwordSet set;
  std::istringstream in{std::string(kPortugueseStopwords)};
  std::string word;
  while (in >> word) set.insert(word);
  return set;
}

StopwordSet parse_stopwords(std::string_view file_contents) {
  StopwordSet set;
  std::istringstream in{std::string(file_contents)};
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    set.insert(unicode::normalize(std::string_view(line).substr(first, last - first + 1)));
  }
  return set;
}

}  // namespace storychart::corpus
