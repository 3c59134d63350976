#ifndef QCSIM_VERSION_HPP
#define QCSIM_VERSION_HPP

#define QCSIM_VERSION "0.1.0"

#endif
