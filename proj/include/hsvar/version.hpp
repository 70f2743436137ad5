#pragma once

#define HSVAR_VERSION "0.1.0"
