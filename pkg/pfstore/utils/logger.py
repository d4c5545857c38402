import os
import csv
import logging

shandle = logging.StreamHandler()
shandle.setFormatter(
    logging.Formatter(
        '[%(levelname)s %(module)s:%(lineno)d %(asctime)s] '
        '%(message)s'))
log = logging.getLogger('pfstore')
log.propagate = False
log.addHandler(shandle)
log.setLevel(logging.INFO)


class AuditLogger(object):
    ''' AuditLogger saves the leakage table of an audit run next to a text log
    '''

    def __init__(self, log_dir):
        ''' Initialize the paths of the text log and the leakage table.

        Args:
            log_dir (str): The directory of the log files
        '''
        self.log_dir = log_dir
        self.txt_path = None
        self.csv_path = None

    def __enter__(self):
        self.txt_path = os.path.join(self.log_dir, 'log.txt')
        self.csv_path = os.path.join(self.log_dir, 'leakage.csv')

        if not os.path.exists(self.log_dir):
            os.makedirs(self.log_dir)

        self.txt_file = open(self.txt_path, 'w')
        self.csv_file = open(self.csv_path, 'w', newline='')
        fieldnames = ['user', 'subset', 'size', 'security_leakage', 'alpha']
        self.writer = csv.DictWriter(self.csv_file, fieldnames=fieldnames)
        self.writer.writeheader()

        return self

    def log(self, text):
        ''' Write the text to log file then echo it through the package logger.
        Args:
            text(string): text to log
        '''
        self.txt_file.write(text+'\n')
        self.txt_file.flush()
        log.info(text)

    def log_leakage(self, user_id, subset, security_leakage, alpha):
        ''' Log one row of the leakage table
        Args:
            user_id (int): the user whose file is measured
            subset (tuple): the colluding server ids
            security_leakage (Fraction): I(F; M, K_U) in bits
            alpha (Fraction): I(F; M_U, K_U) in bits
        '''
        self.writer.writerow({'user': user_id,
                              'subset': ' '.join(str(l) for l in subset),
                              'size': len(subset),
                              'security_leakage': str(security_leakage),
                              'alpha': str(alpha)})

    def __exit__(self, type, value, traceback):
        if self.txt_path is not None:
            self.txt_file.close()
        if self.csv_path is not None:
            self.csv_file.close()
        log.info('Audit logs saved in %s', self.log_dir)
