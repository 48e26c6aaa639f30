#Exit codes used by the command line
EXIT_OK         = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL  = 3

class RadarFieldError(Exception):
    exit_code = EXIT_VALIDATION

class DomainError(RadarFieldError, ValueError):
    pass

class ValidationError(RadarFieldError, ValueError):
    def __init__(self, message, keys=None):
        self.keys = sorted(keys) if keys else []
        if(self.keys):
            message = message + ": " + ", ".join(self.keys)
        super().__init__(message)

class InsufficientSamplesError(RadarFieldError):
    def __init__(self, available, required):
        self.available = available
        self.required  = required
        super().__init__("Calibration needs at least " + str(required) + " samples, got " + str(available) + ".")

class NoInterferenceThresholdError(RadarFieldError):
    pass

class ResourceError(RadarFieldError):
    pass

class NumericalError(RadarFieldError, RuntimeError):
    exit_code = EXIT_NUMERICAL

    def __init__(self, message, **diagnostics):
        self.diagnostics = diagnostics
        if(diagnostics):
            message = message + " (" + ", ".join(k + "=" + repr(v) for k, v in diagnostics.items()) + ")"
        super().__init__(message)
