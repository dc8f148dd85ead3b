#ifndef TOUCHREPLAY_FILE_IO_H_
#define TOUCHREPLAY_FILE_IO_H_

#include <string>

namespace touchreplay {

// Whole-file helpers; both throw Error(kIoError) naming the path.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace touchreplay

#endif  // TOUCHREPLAY_FILE_IO_H_
